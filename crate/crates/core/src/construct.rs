//! The `[q+1, 2]` generator built from a function `f` on GF(q), the MDS
//! conditions on `f`, and the oval-polynomial catalog for even q.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{not_applicable, Error, Result};
use crate::galois::{make_field, subfield_embed, Elem, FieldElement, FiniteField};
use crate::lincode::GenMatrix;

/// Named oval-polynomial families for q = 2^m.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OvalFamily {
    Translation { h: u32 },
    Segre,
    Glynn1,
    Glynn2,
    Glynn3,
    Cherowitzo,
    Payne,
    /// Parameter `a = alpha^a_log`.
    Subiaco { a_log: u64 },
    Adelaide,
}

impl OvalFamily {
    pub fn name(&self) -> &'static str {
        match self {
            OvalFamily::Translation { .. } => "translation",
            OvalFamily::Segre => "segre",
            OvalFamily::Glynn1 => "glynn1",
            OvalFamily::Glynn2 => "glynn2",
            OvalFamily::Glynn3 => "glynn3",
            OvalFamily::Cherowitzo => "cherowitzo",
            OvalFamily::Payne => "payne",
            OvalFamily::Subiaco { .. } => "subiaco",
            OvalFamily::Adelaide => "adelaide",
        }
    }

    /// Families whose parameter reading is not settled and are reported as
    /// experimental when validation fails.
    pub fn is_gated(&self) -> bool {
        matches!(self, OvalFamily::Subiaco { .. } | OvalFamily::Adelaide)
    }

    /// Exponent of the family when it is a monomial on GF(2^m).
    pub fn monomial_exponent(&self, m: u32) -> Option<u64> {
        let pow2 = |e: u32| 1u64 << e;
        match *self {
            OvalFamily::Translation { h } => Some(pow2(h)),
            OvalFamily::Segre => Some(6),
            OvalFamily::Glynn1 => Some(3 * pow2(m.div_ceil(2)) + 4),
            OvalFamily::Glynn2 => Some(pow2(m.div_ceil(2)) + pow2((m + 1) / 4)),
            OvalFamily::Glynn3 => Some(pow2(m.div_ceil(2)) + pow2((3 * m + 1) / 4)),
            _ => None,
        }
    }

    fn check_applicable(&self, m: u32) -> Result<()> {
        let odd = m % 2 == 1;
        let fail = |reason: String| Err(not_applicable(self.name(), reason));
        match *self {
            OvalFamily::Translation { h } => {
                if h == 0 || h.gcd(&m) != 1 {
                    return fail(format!("gcd(h, m) = gcd({h}, {m}) != 1"));
                }
            }
            OvalFamily::Segre | OvalFamily::Glynn1 | OvalFamily::Cherowitzo | OvalFamily::Payne => {
                if !odd {
                    return fail(format!("m = {m} is even"));
                }
            }
            OvalFamily::Glynn2 => {
                if m % 4 != 3 {
                    return fail(format!("m = {m} is not 3 mod 4"));
                }
            }
            OvalFamily::Glynn3 => {
                if m % 4 != 1 {
                    return fail(format!("m = {m} is not 1 mod 4"));
                }
            }
            OvalFamily::Subiaco { .. } => {
                if m < 2 {
                    return fail(format!("m = {m} < 2"));
                }
            }
            OvalFamily::Adelaide => {
                if odd || m < 4 {
                    return fail(format!("m = {m} must be even and at least 4"));
                }
                if 2 * m > 20 {
                    return fail(format!("GF(2^{}) is beyond the table ceiling", 2 * m));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for OvalFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OvalFamily::Translation { h } => write!(f, "translation:{h}"),
            OvalFamily::Subiaco { a_log } => write!(f, "subiaco:{a_log}"),
            other => f.write_str(other.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyKind {
    ConstantOne,
    Monomial { t: u64 },
    NamedOval(OvalFamily),
    ExplicitMap,
}

/// A function GF(q) -> GF(q), stored as its value table.
#[derive(Clone, Debug)]
pub struct PolySpec {
    field: Arc<FiniteField>,
    kind: PolyKind,
    table: Vec<Elem>,
    label: String,
}

impl PolySpec {
    pub fn constant_one(field: &Arc<FiniteField>) -> Self {
        Self {
            field: Arc::clone(field),
            kind: PolyKind::ConstantOne,
            table: vec![Elem::ONE; field.q() as usize],
            label: "1".into(),
        }
    }

    /// `x^t` with `0^t = 0`.
    pub fn monomial(field: &Arc<FiniteField>, t: u64) -> Result<Self> {
        if t == 0 {
            return Err(Error::BadPolySpec("monomial exponent must be positive".into()));
        }
        Ok(Self {
            field: Arc::clone(field),
            kind: PolyKind::Monomial { t },
            table: field.elements().map(|x| field.pow(x, t)).collect(),
            label: format!("x^{t}"),
        })
    }

    pub fn explicit(field: &Arc<FiniteField>, table: Vec<Elem>) -> Result<Self> {
        if table.len() != field.q() as usize {
            return Err(Error::Shape(format!(
                "value table has {} entries, expected {}",
                table.len(),
                field.q()
            )));
        }
        if table.iter().any(|&v| !field.contains(v)) {
            return Err(Error::MixedFields);
        }
        Ok(Self {
            field: Arc::clone(field),
            kind: PolyKind::ExplicitMap,
            table,
            label: "table".into(),
        })
    }

    fn named(field: &Arc<FiniteField>, family: OvalFamily, table: Vec<Elem>, label: String) -> Self {
        Self {
            field: Arc::clone(field),
            kind: PolyKind::NamedOval(family),
            table,
            label,
        }
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn kind(&self) -> &PolyKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    #[inline]
    pub fn eval(&self, x: Elem) -> Elem {
        self.table[x.0 as usize]
    }

    pub fn eval_element(&self, x: &FieldElement) -> Result<FieldElement> {
        if **x.field() != *self.field {
            return Err(Error::MixedFields);
        }
        FieldElement::new(&self.field, self.eval(x.value()))
    }

    /// Parses the command-line grammar: `const1`, `mono:<t>`,
    /// `translation:<h>`, `segre`, `glynn1`, `glynn2`, `glynn3`,
    /// `cherowitzo`, `payne`, `subiaco:<log a>`, `adelaide`.
    pub fn parse(spec: &str, field: &Arc<FiniteField>) -> Result<Self> {
        let bad = || Error::BadPolySpec(spec.to_string());
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let num = |a: Option<&str>| -> Result<u64> { a.ok_or_else(bad)?.parse().map_err(|_| bad()) };
        let family = match head {
            "const1" | "1" if arg.is_none() => return Ok(Self::constant_one(field)),
            "mono" => return Self::monomial(field, num(arg)?),
            "translation" => OvalFamily::Translation {
                h: u32::try_from(num(arg)?).map_err(|_| bad())?,
            },
            "subiaco" => OvalFamily::Subiaco { a_log: num(arg)? },
            _ if arg.is_some() => return Err(bad()),
            "segre" => OvalFamily::Segre,
            "glynn1" => OvalFamily::Glynn1,
            "glynn2" => OvalFamily::Glynn2,
            "glynn3" => OvalFamily::Glynn3,
            "cherowitzo" => OvalFamily::Cherowitzo,
            "payne" => OvalFamily::Payne,
            "adelaide" => OvalFamily::Adelaide,
            _ => return Err(bad()),
        };
        Ok(catalog(&family, field)?.poly)
    }
}

pub fn eval_poly(f: &PolySpec, x: Elem) -> Elem {
    f.eval(x)
}

/// The 2 x (q+1) generator: columns `(f(alpha^i), alpha^i)` for
/// `0 <= i <= q-2`, then `(0, 1)` and `(1, 0)`.
pub fn build_g(f: &PolySpec) -> GenMatrix {
    let field = f.field();
    let n = field.q() as usize + 1;
    let mut top = Vec::with_capacity(n);
    let mut bottom = Vec::with_capacity(n);
    for x in field.nonzero_by_log() {
        top.push(f.eval(x));
        bottom.push(x);
    }
    top.extend([Elem::ZERO, Elem::ONE]);
    bottom.extend([Elem::ONE, Elem::ZERO]);
    GenMatrix::from_rows(field, &[top, bottom]).expect("entries come from the field")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MdsViolation {
    /// `f(x) = 0` for a nonzero `x`.
    ZeroValue { x: Elem },
    /// `y f(x) = x f(y)` for distinct nonzero `x`, `y`.
    ProportionalPair { x: Elem, y: Elem },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MdsWitness {
    pub passed: bool,
    pub violation: Option<MdsViolation>,
}

impl MdsWitness {
    fn from(violation: Option<MdsViolation>) -> Self {
        Self {
            passed: violation.is_none(),
            violation,
        }
    }

    /// Re-evaluates the recorded violation against `f`.
    pub fn recheck(&self, f: &PolySpec) -> bool {
        let field = f.field();
        match self.violation {
            None => true,
            Some(MdsViolation::ZeroValue { x }) => !x.is_zero() && f.eval(x).is_zero(),
            Some(MdsViolation::ProportionalPair { x, y }) => {
                x != y
                    && !x.is_zero()
                    && !y.is_zero()
                    && field.mul(y, f.eval(x)) == field.mul(x, f.eval(y))
            }
        }
    }
}

/// Checks `f(x) != 0` on GF(q)* and that `f(x)/x` is injective on GF(q)*,
/// scanning `x = alpha^0, alpha^1, ...`.
pub fn mds_conditions(f: &PolySpec) -> MdsWitness {
    let field = f.field();
    if let Some(x) = field.nonzero_by_log().find(|&x| f.eval(x).is_zero()) {
        return MdsWitness::from(Some(MdsViolation::ZeroValue { x }));
    }
    let mut seen: Vec<Option<Elem>> = vec![None; field.q() as usize];
    for y in field.nonzero_by_log() {
        let r = field.div(f.eval(y), y).expect("nonzero");
        if let Some(x) = seen[r.0 as usize] {
            return MdsWitness::from(Some(MdsViolation::ProportionalPair { x, y }));
        }
        seen[r.0 as usize] = Some(y);
    }
    MdsWitness::from(None)
}

/// Quadratic reference for [`mds_conditions`]; returns the same witness.
pub fn mds_conditions_pairwise(f: &PolySpec) -> MdsWitness {
    let field = f.field();
    let xs: Vec<Elem> = field.nonzero_by_log().collect();
    if let Some(&x) = xs.iter().find(|&&x| f.eval(x).is_zero()) {
        return MdsWitness::from(Some(MdsViolation::ZeroValue { x }));
    }
    for (j, &y) in xs.iter().enumerate() {
        for &x in &xs[..j] {
            if field.sub(field.mul(y, f.eval(x)), field.mul(x, f.eval(y))).is_zero() {
                return MdsWitness::from(Some(MdsViolation::ProportionalPair { x, y }));
            }
        }
    }
    MdsWitness::from(None)
}

/// `gcd(q - 1, t - 1) = 1`.
pub fn gcd_condition(t: u64, q: u64) -> bool {
    (q - 1).gcd(&(t.saturating_sub(1))) == 1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OvalWitness {
    NotPermutation { x: Elem, y: Elem },
    /// The slopes from `x` to `y` and from `x` to `z` coincide.
    SlopeCollision { x: Elem, y: Elem, z: Elem },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OvalReport {
    pub is_oval: bool,
    /// `f(0) = 0` and `f(1) = 1`; reported separately from the slope test.
    pub normalized: bool,
    pub witness: Option<OvalWitness>,
}

/// Permutation test plus the slope condition: for each `x` the quotients
/// `(f(x) + f(y)) / (x + y)`, `y != x`, are pairwise distinct.
pub fn oval_check(f: &PolySpec) -> Result<OvalReport> {
    let field = f.field();
    if field.p() != 2 {
        return Err(Error::OddCharacteristic);
    }
    let q = field.q() as usize;
    let normalized = f.eval(Elem::ZERO).is_zero() && f.eval(Elem::ONE) == Elem::ONE;
    let mut preimage: Vec<Option<Elem>> = vec![None; q];
    for x in field.elements() {
        let v = f.eval(x);
        if let Some(y) = preimage[v.0 as usize] {
            return Ok(OvalReport {
                is_oval: false,
                normalized,
                witness: Some(OvalWitness::NotPermutation { x: y, y: x }),
            });
        }
        preimage[v.0 as usize] = Some(x);
    }
    let witness = (0..q as u32).into_par_iter().find_map_first(|xv| {
        let x = Elem(xv);
        let fx = f.eval(x);
        let mut seen: Vec<Option<Elem>> = vec![None; q];
        for y in field.elements().filter(|&y| y != x) {
            let s = field.div(field.add(fx, f.eval(y)), field.add(x, y)).expect("x != y");
            if let Some(z) = seen[s.0 as usize] {
                return Some(OvalWitness::SlopeCollision { x, y: z, z: y });
            }
            seen[s.0 as usize] = Some(y);
        }
        None
    });
    Ok(OvalReport {
        is_oval: witness.is_none(),
        normalized,
        witness,
    })
}

/// A catalog instance with its validation status.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub poly: PolySpec,
    pub experimental: bool,
    pub notes: Vec<String>,
}

fn mod_inverse(a: u64, n: u64) -> Option<u64> {
    let e = num_integer::Integer::extended_gcd(&(a as i128), &(n as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(n as i128) as u64)
}

/// Exponents `(5/6, 1/2, 1/6)` modulo `2^m - 1` of the Payne family.
pub fn payne_exponents(m: u32) -> Option<[u64; 3]> {
    let n = (1u64 << m) - 1;
    let inv6 = mod_inverse(6, n)?;
    Some([5 * inv6 % n, 1 << (m - 1), inv6])
}

fn monomial_sum(field: &FiniteField, exps: &[u64]) -> Vec<Elem> {
    field
        .elements()
        .map(|x| {
            exps.iter()
                .fold(Elem::ZERO, |acc, &e| field.add(acc, field.pow(x, e)))
        })
        .collect()
}

fn subiaco_table(field: &FiniteField, a: Elem) -> Vec<Elem> {
    let a2 = field.mul(a, a);
    let c = field.mul(a2, field.add(field.add(Elem::ONE, a), a2));
    let half = 1u64 << (field.m() - 1);
    field
        .elements()
        .map(|x| {
            let x2 = field.pow(x, 2);
            let x3 = field.pow(x, 3);
            let x4 = field.pow(x, 4);
            let num = field.add(field.mul(a2, field.add(x4, x)), field.mul(c, field.add(x3, x2)));
            let den = field.add(field.add(x4, field.mul(a2, x2)), Elem::ONE);
            field.add(field.mul(num, field.pow_inv_or_zero(den)), field.pow(x, half))
        })
        .collect()
}

/// Adelaide values for one `(beta, k)` choice, computed in GF(q^2). `None`
/// when some value falls outside GF(q).
fn adelaide_table(field: &Arc<FiniteField>, big: &Arc<FiniteField>, beta: Elem, k: u64) -> Result<Option<Vec<Elem>>> {
    let emb = subfield_embed(big, field.m())?;
    let q = field.q() as u64;
    let t = |y: Elem| big.add(y, big.pow(y, q));
    let tb = t(beta);
    let tbk = t(big.pow(beta, k));
    let beta_q = big.pow(beta, q);
    let inv_tb = big.inv(tb)?;
    let half = 1u64 << (field.m() - 1);
    let mut out = Vec::with_capacity(q as usize);
    for x in field.elements() {
        let xe = emb.embed(x);
        let sqrt_x = emb.embed(field.pow(x, half));
        let first = big.mul(big.mul(tbk, big.add(xe, Elem::ONE)), inv_tb);
        let num = t(big.pow(big.add(big.mul(beta, xe), beta_q), k));
        let den_base = big.add(big.add(xe, big.mul(tb, sqrt_x)), Elem::ONE);
        let den = big.mul(tb, big.pow(den_base, k - 1));
        let second = big.mul(num, big.pow_inv_or_zero(den));
        let v = big.add(big.add(first, second), sqrt_x);
        match emb.preimage(v) {
            Some(y) => out.push(y),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// Result of scanning every Adelaide parameter choice.
#[derive(Clone, Debug)]
pub struct AdelaideScan {
    /// `(j, k, is_oval)` with `beta = g^((q-1) j)` for a primitive `g` of GF(q^2).
    pub trials: Vec<(u64, u64, bool)>,
}

/// Exponents tried for the Adelaide family: the extension degree itself and
/// the two residues `+-(q-1)/3 mod (q+1)`.
pub fn adelaide_exponents(m: u32) -> Vec<u64> {
    let q = 1u64 << m;
    let mut ks = vec![(q - 1) / 3, q + 1 - (q - 1) / 3, m as u64];
    ks.dedup();
    ks
}

pub fn adelaide_scan(field: &Arc<FiniteField>) -> Result<AdelaideScan> {
    let m = field.m();
    let big = make_field(2, 2 * m)?;
    let q = field.q() as u64;
    let mut trials = Vec::new();
    for k in adelaide_exponents(m) {
        for j in 1..=q {
            let beta = big.alpha_pow((q - 1) * j);
            let ok = match adelaide_table(field, &big, beta, k)? {
                Some(table) => {
                    let spec = PolySpec::explicit(field, table)?;
                    oval_check(&spec)?.is_oval
                }
                None => false,
            };
            trials.push((j, k, ok));
        }
    }
    Ok(AdelaideScan { trials })
}

/// Instantiates a named family on `field` (which must have characteristic 2)
/// and validates it with [`oval_check`].
pub fn catalog(family: &OvalFamily, field: &Arc<FiniteField>) -> Result<CatalogEntry> {
    if field.p() != 2 {
        return Err(Error::OddCharacteristic);
    }
    let m = field.m();
    family.check_applicable(m)?;
    let mut notes = Vec::new();
    let poly = match family {
        OvalFamily::Cherowitzo => {
            let e = 1u64 << m.div_ceil(2);
            let exps = [e, e + 2, 3 * e + 4];
            PolySpec::named(
                field,
                family.clone(),
                monomial_sum(field, &exps),
                format!("x^{} + x^{} + x^{}", exps[0], exps[1], exps[2]),
            )
        }
        OvalFamily::Payne => {
            let exps = payne_exponents(m).ok_or_else(|| not_applicable("payne", "6 is not invertible mod q-1"))?;
            notes.push("third exponent taken as 1/6 mod (q-1)".into());
            PolySpec::named(
                field,
                family.clone(),
                monomial_sum(field, &exps),
                format!("x^{} + x^{} + x^{}", exps[0], exps[1], exps[2]),
            )
        }
        OvalFamily::Subiaco { a_log } => {
            let a = field.alpha_pow(*a_log);
            let inv_a = field.inv(a)?;
            if field.abs_trace(inv_a) != Elem::ONE {
                return Err(not_applicable("subiaco", format!("Tr(1/a) = 0 for a = alpha^{a_log}")));
            }
            if m % 4 == 2 && m >= 2 && field.in_subfield(a, 2) {
                return Err(not_applicable("subiaco", "a lies in GF(4) and m = 2 mod 4"));
            }
            notes.push("side condition 'not in GF(4)' applied to the parameter a".into());
            PolySpec::named(field, family.clone(), subiaco_table(field, a), format!("subiaco(a = alpha^{a_log})"))
        }
        OvalFamily::Adelaide => {
            let big = make_field(2, 2 * m)?;
            let q = field.q() as u64;
            let mut found = None;
            'search: for k in adelaide_exponents(m) {
                for j in 1..=q {
                    if let Some(table) = adelaide_table(field, &big, big.alpha_pow((q - 1) * j), k)? {
                        let spec = PolySpec::explicit(field, table.clone())?;
                        if oval_check(&spec)?.is_oval {
                            found = Some((j, k, table));
                            break 'search;
                        }
                    }
                }
            }
            let (j, k, table) = match found {
                Some(t) => t,
                None => {
                    let k = adelaide_exponents(m)[0];
                    let table = adelaide_table(field, &big, big.alpha_pow(q - 1), k)?
                        .ok_or_else(|| Error::ValidationFailed("adelaide values leave GF(q)".into()))?;
                    (1, k, table)
                }
            };
            notes.push(format!("exponent k = {k}, beta = g^((q-1)*{j}) with g primitive in GF(q^2)"));
            PolySpec::named(field, family.clone(), table, format!("adelaide(j = {j}, k = {k})"))
        }
        _ => {
            let e = family.monomial_exponent(m).expect("monomial family");
            PolySpec::named(field, family.clone(), field.elements().map(|x| field.pow(x, e)).collect(), format!("x^{e}"))
        }
    };
    let report = oval_check(&poly)?;
    let experimental = if report.is_oval {
        false
    } else if family.is_gated() {
        notes.push(format!("failed the slope test: {:?}", report.witness));
        true
    } else {
        return Err(Error::ValidationFailed(family.to_string()));
    };
    if !report.normalized {
        notes.push("f(0) = 0, f(1) = 1 normalization does not hold".into());
    }
    Ok(CatalogEntry {
        poly,
        experimental,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincode::{dual_min_distance_upto, weight_distribution, LinearCode};

    fn gf(p: u64, m: u32) -> Arc<FiniteField> {
        make_field(p, m).unwrap()
    }

    #[test]
    fn generator_layout() {
        let f = gf(2, 1);
        let g = build_g(&PolySpec::constant_one(&f));
        assert_eq!(g.cols(), 3);
        assert_eq!(g.column(0), vec![Elem(1), Elem(1)]);
        assert_eq!(g.column(1), vec![Elem(0), Elem(1)]);
        assert_eq!(g.column(2), vec![Elem(1), Elem(0)]);

        let f = gf(2, 2);
        let g = build_g(&PolySpec::monomial(&f, 2).unwrap());
        assert_eq!(g.cols(), 5);
        for i in 0..3 {
            assert_eq!(g.column(i), vec![f.alpha_pow(2 * i as u64), f.alpha_pow(i as u64)]);
        }
    }

    #[test]
    fn monomial_values() {
        let f = gf(2, 3);
        let x6 = PolySpec::monomial(&f, 6).unwrap();
        assert_eq!(x6.eval(f.alpha()), f.alpha_pow(6));
        assert_eq!(x6.eval(Elem::ZERO), Elem::ZERO);
        assert!(PolySpec::monomial(&f, 0).is_err());
        let x8 = PolySpec::monomial(&f, 8).unwrap();
        assert_eq!(x8.eval(f.alpha()), f.alpha());
    }

    #[test]
    fn mds_examples() {
        let f = gf(3, 2);
        assert!(mds_conditions(&PolySpec::constant_one(&f)).passed);
        let id = PolySpec::monomial(&f, 1).unwrap();
        let w = mds_conditions(&id);
        assert!(!w.passed);
        assert_eq!(
            w.violation,
            Some(MdsViolation::ProportionalPair { x: Elem::ONE, y: f.alpha() })
        );
        assert!(w.recheck(&id));
        let mut table = vec![Elem::ONE; 9];
        table[f.alpha_pow(3).0 as usize] = Elem::ZERO;
        let z = PolySpec::explicit(&f, table).unwrap();
        let w = mds_conditions(&z);
        assert_eq!(w.violation, Some(MdsViolation::ZeroValue { x: f.alpha_pow(3) }));
        assert!(w.recheck(&z));
    }

    #[test]
    fn monomial_mds_iff_gcd() {
        for (p, m) in [(2, 2), (2, 3), (2, 4), (3, 2), (5, 2), (3, 3), (2, 6), (7, 2), (2, 8)] {
            let f = gf(p, m);
            let q = f.q() as u64;
            for t in 1..q + 3 {
                let spec = PolySpec::monomial(&f, t).unwrap();
                let fast = mds_conditions(&spec);
                assert_eq!(fast.passed, gcd_condition(t, q), "q={q} t={t}");
                if q <= 64 {
                    assert_eq!(fast, mds_conditions_pairwise(&spec));
                }
                assert!(fast.recheck(&spec));
            }
        }
        assert!(gcd_condition(5, 16));
        assert!(gcd_condition(2, 27));
        assert!(!gcd_condition(1, 9));
    }

    #[test]
    fn mds_witness_matches_dual_distance() {
        let f = gf(2, 3);
        for t in 1..10 {
            let spec = PolySpec::monomial(&f, t).unwrap();
            let code = LinearCode::new(build_g(&spec));
            let d = dual_min_distance_upto(&code, 4).exact();
            if mds_conditions(&spec).passed {
                assert_eq!(d, Some(3));
                let wd = weight_distribution(&code).unwrap();
                assert_eq!(wd.nonzero_weights(), vec![(8, 63)]);
            } else {
                assert!(d.unwrap() <= 2);
            }
        }
    }

    #[test]
    fn oval_examples() {
        let f = gf(2, 4);
        assert!(oval_check(&PolySpec::monomial(&f, 2).unwrap()).unwrap().is_oval);
        let id = oval_check(&PolySpec::monomial(&f, 1).unwrap()).unwrap();
        assert!(!id.is_oval && id.normalized);
        assert!(matches!(id.witness, Some(OvalWitness::SlopeCollision { .. })));
        let x6 = oval_check(&PolySpec::monomial(&f, 6).unwrap()).unwrap();
        assert!(!x6.is_oval);
        // x^3 is not a permutation of GF(16) since 3 | 15
        let x3 = oval_check(&PolySpec::monomial(&f, 3).unwrap()).unwrap();
        assert!(matches!(x3.witness, Some(OvalWitness::NotPermutation { .. })));
        assert!(matches!(
            oval_check(&PolySpec::constant_one(&gf(3, 2))),
            Err(Error::OddCharacteristic)
        ));
    }

    #[test]
    fn slope_witness_is_genuine() {
        let f = gf(2, 5);
        let spec = PolySpec::monomial(&f, 5).unwrap();
        let r = oval_check(&spec).unwrap();
        if let Some(OvalWitness::SlopeCollision { x, y, z }) = r.witness {
            let s = |a: Elem| f.div(f.add(spec.eval(x), spec.eval(a)), f.add(x, a)).unwrap();
            assert!(x != y && y != z && x != z);
            assert_eq!(s(y), s(z));
        } else {
            panic!("x^5 on GF(32) should fail the slope test, got {r:?}");
        }
    }

    #[test]
    fn catalog_monomials() {
        assert_eq!(
            catalog(&OvalFamily::Translation { h: 1 }, &gf(2, 4)).unwrap().poly.label(),
            "x^2"
        );
        assert_eq!(catalog(&OvalFamily::Glynn1, &gf(2, 5)).unwrap().poly.label(), "x^28");
        assert!(!catalog(&OvalFamily::Segre, &gf(2, 5)).unwrap().experimental);
        assert!(matches!(
            catalog(&OvalFamily::Segre, &gf(2, 4)),
            Err(Error::NotApplicable { .. })
        ));
        assert!(matches!(
            catalog(&OvalFamily::Translation { h: 2 }, &gf(2, 4)),
            Err(Error::NotApplicable { .. })
        ));
        assert!(matches!(
            catalog(&OvalFamily::Segre, &gf(3, 3)),
            Err(Error::OddCharacteristic)
        ));
    }

    #[test]
    fn payne_exponents_are_integral() {
        for m in [3u32, 5, 7] {
            assert_eq!(((1u64 << (m - 1)) + 2) % 3, 0);
            let e = payne_exponents(m).unwrap();
            assert_eq!(e[0], (1u64 << (m - 1)).div_ceil(3));
            let n = (1u64 << m) - 1;
            assert_eq!(6 * e[2] % n, 1);
            assert_eq!(2 * e[1] % n, 1);
        }
        assert_eq!(payne_exponents(5).unwrap(), [6, 16, 26]);
    }

    #[test]
    fn subiaco_conditions() {
        let f = gf(2, 5);
        let good = (0..31u64)
            .find(|&l| f.abs_trace(f.inv(f.alpha_pow(l)).unwrap()) == Elem::ONE)
            .unwrap();
        let e = catalog(&OvalFamily::Subiaco { a_log: good }, &f).unwrap();
        assert_eq!(e.poly.eval(Elem::ONE), Elem::ONE);
        let bad = (0..31u64)
            .find(|&l| f.abs_trace(f.inv(f.alpha_pow(l)).unwrap()).is_zero())
            .unwrap();
        assert!(matches!(
            catalog(&OvalFamily::Subiaco { a_log: bad }, &f),
            Err(Error::NotApplicable { .. })
        ));
    }

    #[test]
    fn adelaide_exponent_reading() {
        let f = gf(2, 4);
        let e = catalog(&OvalFamily::Adelaide, &f).unwrap();
        assert!(!e.experimental);
        assert_eq!(e.poly.label(), "adelaide(j = 1, k = 5)");
        let scan = adelaide_scan(&f).unwrap();
        for &(_, k, ok) in &scan.trials {
            assert_eq!(ok, k == 5 || k == 12, "k = {k}");
        }
        assert_eq!(scan.trials.len(), 3 * 16);
    }

    #[test]
    fn parse_grammar() {
        let f = gf(2, 5);
        assert_eq!(PolySpec::parse("const1", &f).unwrap().kind(), &PolyKind::ConstantOne);
        assert_eq!(PolySpec::parse("mono:3", &f).unwrap().label(), "x^3");
        assert_eq!(PolySpec::parse("segre", &f).unwrap().label(), "x^6");
        assert_eq!(PolySpec::parse("translation:2", &f).unwrap().label(), "x^4");
        for bad in ["mono", "mono:x", "segre:1", "nope", "mono:0"] {
            assert!(PolySpec::parse(bad, &f).is_err(), "{bad}");
        }
    }
}
