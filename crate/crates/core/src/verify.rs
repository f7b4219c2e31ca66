//! Closed-form weight enumerators for the subfield-code families, comparison
//! with computed distributions, optimality flags and conjecture probes.

use std::fmt;

use serde_json::{json, Map, Value};

use crate::construct::{build_g, PolySpec};
use crate::error::{not_applicable, Error, Result};
use crate::galois::make_field;
use crate::lincode::{
    dual_min_distance_upto, dual_weight3_count, is_griesmer_nearly_optimal, mds_weight_formula,
    pless_dual_low_weights, sphere_packing_excludes, sphere_packing_max_dim, weight_distribution_with,
    EnumOptions, LinearCode, WeightDistribution,
};
use crate::subfield::subfield_code;

/// Largest length for which the direct weight-3 dual count is run.
pub const DIRECT_A3_MAX_LEN: usize = 300;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoremId {
    /// Weight distribution of the `[q+1, 2, q]` MDS code.
    Thm3_1,
    /// `f = 1`.
    Thm5_1,
    /// `f = x^(p^l + 1)` over GF(p^(2l)).
    Thm6_4,
    /// `f = x^2`, odd p, odd m.
    Thm6_7,
    /// `f = x^3`, p = 2, odd m.
    Thm6_9,
    /// `f = x^2`, p = 2.
    Thm7_4,
    Conj1,
    Conj2,
    Conj3,
    Conj4,
}

impl TheoremId {
    pub fn all() -> [TheoremId; 10] {
        use TheoremId::*;
        [Thm3_1, Thm5_1, Thm6_4, Thm6_7, Thm6_9, Thm7_4, Conj1, Conj2, Conj3, Conj4]
    }

    pub fn name(&self) -> &'static str {
        match self {
            TheoremId::Thm3_1 => "thm3_1",
            TheoremId::Thm5_1 => "thm5_1",
            TheoremId::Thm6_4 => "thm6_4",
            TheoremId::Thm6_7 => "thm6_7",
            TheoremId::Thm6_9 => "thm6_9",
            TheoremId::Thm7_4 => "thm7_4",
            TheoremId::Conj1 => "conj1",
            TheoremId::Conj2 => "conj2",
            TheoremId::Conj3 => "conj3",
            TheoremId::Conj4 => "conj4",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let norm = s.to_ascii_lowercase().replace(['.', '-'], "_");
        Self::all().into_iter().find(|t| t.name() == norm)
    }

    pub fn is_conjecture(&self) -> bool {
        matches!(self, TheoremId::Conj1 | TheoremId::Conj2 | TheoremId::Conj3 | TheoremId::Conj4)
    }

    /// Whether `param` is `l` (with `m = 2l`) rather than `m`.
    pub fn param_is_l(&self) -> bool {
        *self == TheoremId::Thm6_4
    }

    /// Applicability on `(p, m-or-l)`.
    pub fn check(&self, p: u64, param: u32) -> Result<()> {
        let fail = |reason: String| Err(not_applicable(self.name(), reason));
        let odd_m = param % 2 == 1;
        match self {
            TheoremId::Thm3_1 => {
                if param < 1 {
                    return fail("m must be positive".into());
                }
            }
            TheoremId::Thm5_1 => {
                if param < 2 {
                    return fail(format!("m = {param} < 2"));
                }
            }
            TheoremId::Thm6_4 => {
                if param < 2 {
                    return fail(format!("l = {param} < 2"));
                }
            }
            TheoremId::Thm6_7 => {
                if p == 2 || !odd_m {
                    return fail(format!("needs odd p and odd m, got p = {p}, m = {param}"));
                }
            }
            TheoremId::Thm6_9 => {
                if p != 2 || !odd_m || param < 3 {
                    return fail(format!("needs p = 2 and odd m >= 3, got p = {p}, m = {param}"));
                }
            }
            TheoremId::Thm7_4 => {
                if p != 2 || param < 2 {
                    return fail(format!("needs p = 2 and m >= 2, got p = {p}, m = {param}"));
                }
            }
            TheoremId::Conj1 | TheoremId::Conj2 => {
                if p != 2 || !odd_m || param < 5 {
                    return fail(format!("needs p = 2 and odd m >= 5, got p = {p}, m = {param}"));
                }
            }
            TheoremId::Conj3 => {
                if p != 2 || param % 4 != 3 {
                    return fail(format!("needs p = 2 and m = 3 mod 4, got p = {p}, m = {param}"));
                }
            }
            TheoremId::Conj4 => {
                if p != 2 || param % 4 != 1 || param < 5 {
                    return fail(format!("needs p = 2 and m = 1 mod 4, m >= 5, got p = {p}, m = {param}"));
                }
            }
        }
        Ok(())
    }

    /// Extension degree of GF(q).
    pub fn field_degree(&self, param: u32) -> u32 {
        if self.param_is_l() {
            2 * param
        } else {
            param
        }
    }

    /// Exponent `t` of the monomial `f = x^t`; `0` stands for `f = 1`.
    pub fn exponent(&self, p: u64, param: u32) -> u64 {
        let m = param;
        match self {
            TheoremId::Thm3_1 | TheoremId::Thm5_1 => 0,
            TheoremId::Thm6_4 => p.pow(param) + 1,
            TheoremId::Thm6_7 | TheoremId::Thm7_4 => 2,
            TheoremId::Thm6_9 | TheoremId::Conj1 => 3,
            TheoremId::Conj2 => 6,
            TheoremId::Conj3 => (1 << m.div_ceil(2)) + (1 << ((m + 1) / 4)),
            TheoremId::Conj4 => (1 << m.div_ceil(2)) + (1 << ((3 * m + 1) / 4)),
        }
    }

    /// Optimality flags the statement asserts.
    pub fn claimed_flags(&self) -> &'static [Flag] {
        match self {
            TheoremId::Thm5_1 => &[Flag::GriesmerNearlyOptimal, Flag::SpherePackingDimOptimalDual],
            TheoremId::Thm6_4 | TheoremId::Thm6_7 => &[Flag::SpherePackingNearlyOptimalDual],
            TheoremId::Thm7_4 => &[Flag::SpherePackingDimOptimalDual],
            _ => &[],
        }
    }

    /// Claimed dual minimum distance.
    pub fn claimed_dual_d(&self) -> Option<usize> {
        match self {
            TheoremId::Thm6_9 => None,
            _ => Some(3),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flag {
    GriesmerNearlyOptimal,
    SpherePackingDimOptimalDual,
    SpherePackingNearlyOptimalDual,
}

impl Flag {
    pub fn name(&self) -> &'static str {
        match self {
            Flag::GriesmerNearlyOptimal => "griesmer_nearly_optimal",
            Flag::SpherePackingDimOptimalDual => "sphere_packing_dim_optimal_dual",
            Flag::SpherePackingNearlyOptimalDual => "sphere_packing_nearly_optimal_dual",
        }
    }

    pub fn all() -> [Flag; 3] {
        [
            Flag::GriesmerNearlyOptimal,
            Flag::SpherePackingDimOptimalDual,
            Flag::SpherePackingNearlyOptimalDual,
        ]
    }
}

/// Parameters and, when known, the full distribution a statement predicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// False when `d` is only a lower bound.
    pub d_exact: bool,
    pub distribution: Option<WeightDistribution>,
}

impl Prediction {
    fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "k": self.k,
            "d": self.d,
            "d_exact": self.d_exact,
            "weights": self.distribution.as_ref().map(|w| w.to_json()["weights"].clone()),
        })
    }

    /// The distribution sums to `q^k`, starts with `A_0 = 1` and has minimum
    /// weight `d`.
    pub fn is_consistent(&self) -> bool {
        match &self.distribution {
            None => true,
            Some(w) => w.is_consistent() && w.min_distance() == Some(self.d) && w.n == self.n && w.k == self.k,
        }
    }
}

fn ipow(b: u64, e: u32) -> i128 {
    (b as i128).pow(e)
}

fn assemble(p: u32, q: u64, n: usize, k: usize, terms: &[(i128, i128)]) -> Result<WeightDistribution> {
    let mut counts = vec![0u64; n + 1];
    counts[0] = 1;
    for &(w, c) in terms {
        if c == 0 {
            continue;
        }
        if c < 0 || w < 1 || w as usize > n {
            return Err(Error::InconsistentDistribution(format!("term {c} z^{w} outside range")));
        }
        counts[w as usize] += c as u64;
    }
    Ok(WeightDistribution { p, q, n, k, counts })
}

/// Predicted parameters and enumerator for `theorem` at `(p, m-or-l)`.
/// Conjectures yield parameters with `d_exact = true` and no distribution.
pub fn predicted(theorem: TheoremId, p: u64, param: u32) -> Result<Prediction> {
    theorem.check(p, param)?;
    let pp = p as i128;
    let p32 = p as u32;
    let pred = |n: i128, k: usize, d: i128, d_exact: bool, dist: Option<WeightDistribution>| Prediction {
        n: n as usize,
        k,
        d: d as usize,
        d_exact,
        distribution: dist,
    };
    Ok(match theorem {
        TheoremId::Thm3_1 => {
            let q = ipow(p, param);
            let wd = mds_weight_formula(q as u64 + 1, 2, q as u64)?;
            pred(q + 1, 2, q, true, Some(wd))
        }
        TheoremId::Thm5_1 => {
            let m = param;
            let q = ipow(p, m);
            let m1 = ipow(p, m - 1);
            let d = (pp - 1) * m1;
            let n = q + 1;
            let k = m as usize + 1;
            let terms = [(d, pp * (m1 - 1)), (d + 1, q * (pp - 1)), (q, pp - 1)];
            pred(n, k, d, true, Some(assemble(p32, p, n as usize, k, &terms)?))
        }
        TheoremId::Thm6_4 => {
            let l = param;
            let a = ipow(p, l - 1);
            let a2 = ipow(p, 2 * l - 2);
            let pl = ipow(p, l);
            let d = a * (pl * pp - pl - 1);
            let w = ipow(p, 2 * l - 1) * (pp - 1);
            let v = (pp - 1) * (ipow(p, 2 * l - 1) + a);
            let sq = (pp - 1) * (pp - 1);
            let terms = [
                (d, (pp - 1) * (a - 1) * (a2 + a)),
                (d + 1, a2 * sq * (2 * a - 1)),
                (d + 2, a2 * sq * (pl - a + 1)),
                (w, ipow(p, 2 * l - 1) - 1),
                (w + 1, ipow(p, 2 * l) - ipow(p, 2 * l - 1)),
                (v, (a - 1) * (a2 - pl + a)),
                (v + 1, a2 * (pp - 1) * (2 * a - 1)),
                (v + 2, a2 * sq * (a - 1)),
            ];
            let n = ipow(p, 2 * l) + 1;
            let k = 3 * l as usize;
            pred(n, k, d, true, Some(assemble(p32, p, n as usize, k, &terms)?))
        }
        TheoremId::Thm6_7 => {
            let m = param;
            let w0 = ipow(p, m - 1) * (pp - 1);
            let s = ipow(p, (m - 1) / 2);
            let m1 = ipow(p, m - 1);
            let m2 = ipow(p, m - 2);
            let pm = ipow(p, m);
            let s3 = ipow(p, 3 * (m - 1) / 2);
            let sq = (pp - 1) * (pp - 1);
            let e1: i128 = if ((p - 1) * (m as u64 + 1) / 4).is_multiple_of(2) { 1 } else { -1 };
            let e2: i128 = if (((p - 1) * (m as u64 + 1) + 4) / 4).is_multiple_of(2) { 1 } else { -1 };
            let lo = w0 - s * e1;
            let hi = w0 + s * e1;
            let terms = [
                (w0, (m1 - 1) * (m2 + 1)),
                (w0 + 1, m2 * (pp - 1) * (2 * m1 + 2 * pp - 2)),
                (w0 + 2, m2 * sq * (m1 - 1)),
                (lo, (pp - 1) * (m1 - 1) * (m2 + e1 * s) / 2),
                (lo + 1, m2 * sq * (m1 - 1)),
                (lo + 2, (m2 * sq * (pm - m1 + 1) + e1 * s3 * sq) / 2),
                (hi, (pp - 1) * (m1 - 1) * (m2 + e2 * s) / 2),
                (hi + 1, m2 * sq * (m1 - 1)),
                (hi + 2, (m2 * sq * (pm - m1 + 1) + e2 * s3 * sq) / 2),
            ];
            let n = pm + 1;
            let k = 2 * m as usize;
            pred(n, k, w0 - s, true, Some(assemble(p32, p, n as usize, k, &terms)?))
        }
        TheoremId::Thm7_4 => {
            let m = param;
            let h = ipow(2, m - 1);
            let terms = [(2, 1), (h, h - 1), (h + 1, ipow(2, m)), (h + 2, h - 1)];
            let n = ipow(2, m) + 1;
            let k = m as usize + 1;
            pred(n, k, 2, true, Some(assemble(2, 2, n as usize, k, &terms)?))
        }
        TheoremId::Thm6_9 => {
            let m = param;
            let d = ipow(2, m - 1) - ipow(2, (m - 1) / 2);
            let exact = ((m as i128 * m as i128 - 1) / 8) % 2 == 1;
            pred(ipow(2, m) + 1, 2 * m as usize, d, exact, None)
        }
        TheoremId::Conj1 | TheoremId::Conj2 | TheoremId::Conj3 | TheoremId::Conj4 => {
            let m = param;
            let d = ipow(2, m - 1) - ipow(2, (m - 1) / 2);
            pred(ipow(2, m) + 1, 2 * m as usize, d, true, None)
        }
    })
}

#[derive(Clone, Debug)]
pub struct DualInfo {
    pub n: usize,
    pub k: usize,
    /// `None` when every 3 columns are independent.
    pub d: Option<usize>,
    pub a3: u64,
    pub a3_direct: Option<u64>,
}

/// Findings of a conjecture probe.
#[derive(Clone, Debug)]
pub struct ConjectureFinding {
    pub params_agree: bool,
    pub nonzero_weights: usize,
    pub weights_agree: bool,
    pub dual_agree: bool,
}

impl ConjectureFinding {
    pub fn agrees(&self) -> bool {
        self.params_agree && self.weights_agree && self.dual_agree
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    pub p: u64,
    pub param: u32,
    pub f: String,
    pub computed: WeightDistribution,
    pub predicted: Option<Prediction>,
    pub dual: DualInfo,
    pub flags: Vec<(Flag, bool)>,
    pub claimed: Vec<Flag>,
    pub conjecture: Option<ConjectureFinding>,
    pub notes: Vec<String>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn flag(&self, f: Flag) -> bool {
        self.flags.iter().find(|(g, _)| *g == f).is_some_and(|x| x.1)
    }

    /// `[n, k, d]` of the computed code.
    pub fn params(&self) -> (usize, usize, Option<usize>) {
        (self.computed.n, self.computed.k, self.computed.min_distance())
    }

    pub fn to_json(&self) -> Value {
        let mut flags = Map::new();
        for (f, v) in &self.flags {
            flags.insert(f.name().into(), json!(v));
        }
        let mut computed = self.computed.to_json();
        if let Value::Object(o) = &mut computed {
            o.insert("nonzero_weights".into(), json!(self.computed.num_nonzero_weights()));
        }
        let mut out = json!({
            "theorem": self.theorem.name(),
            "p": self.p,
            "param": self.param,
            "f": self.f,
            "computed": computed,
            "predicted": self.predicted.as_ref().map(|p| p.to_json()),
            "dual": {
                "n": self.dual.n,
                "k": self.dual.k,
                "d": self.dual.d,
                "A3": self.dual.a3,
                "A3_direct": self.dual.a3_direct,
            },
            "flags": flags,
            "claimed_flags": self.claimed.iter().map(|f| f.name()).collect::<Vec<_>>(),
            "notes": self.notes,
            "pass": self.pass,
        });
        if let Some(c) = &self.conjecture {
            out["conjecture"] = json!({
                "params_agree": c.params_agree,
                "nonzero_weights": c.nonzero_weights,
                "weights_agree": c.weights_agree,
                "dual_agree": c.dual_agree,
                "agrees": c.agrees(),
            });
        }
        out
    }
}

/// Optimality flags of a code with distribution `wd` over GF(p).
pub fn optimality_flags(wd: &WeightDistribution, dual_d: Option<usize>) -> Vec<(Flag, bool)> {
    let (n, k, q) = (wd.n as u64, wd.k as u64, wd.q);
    let d = wd.min_distance().unwrap_or(0) as u64;
    let kd = n - k;
    let griesmer = d > 0 && is_griesmer_nearly_optimal(n, k, d, q);
    let dim_opt = dual_d == Some(3) && sphere_packing_max_dim(n, 3, q).is_ok_and(|kmax| kmax == kd);
    let nearly = dual_d == Some(3) && sphere_packing_excludes(n, kd, 5, q);
    vec![
        (Flag::GriesmerNearlyOptimal, griesmer),
        (Flag::SpherePackingDimOptimalDual, dim_opt),
        (Flag::SpherePackingNearlyOptimalDual, nearly),
    ]
}

fn build_code(theorem: TheoremId, p: u64, param: u32) -> Result<(LinearCode, String)> {
    let field = make_field(p, theorem.field_degree(param))?;
    let t = theorem.exponent(p, param);
    let f = if t == 0 {
        PolySpec::constant_one(&field)
    } else {
        PolySpec::monomial(&field, t)?
    };
    let code = if theorem == TheoremId::Thm3_1 {
        LinearCode::new(build_g(&f))
    } else {
        subfield_code(&f)?
    };
    Ok((code, f.label().to_string()))
}

fn dual_info(code: &LinearCode, wd: &WeightDistribution) -> Result<DualInfo> {
    let d = dual_min_distance_upto(code, 3).exact();
    let (_, _, a3) = pless_dual_low_weights(wd)?;
    let a3_direct = (code.length() <= DIRECT_A3_MAX_LEN).then(|| dual_weight3_count(code));
    Ok(DualInfo {
        n: code.length(),
        k: code.length() - code.dimension(),
        d,
        a3,
        a3_direct,
    })
}

/// Builds the code for `theorem`, enumerates it and compares with the
/// prediction and the claimed dual distance and optimality flags.
pub fn run_verification(theorem: TheoremId, p: u64, param: u32, opts: &EnumOptions) -> Result<VerificationReport> {
    if theorem.is_conjecture() {
        return probe_conjecture(theorem, param, opts);
    }
    let pred = predicted(theorem, p, param)?;
    let (code, label) = build_code(theorem, p, param)?;
    let wd = weight_distribution_with(&code, opts)?;
    let dual = dual_info(&code, &wd)?;
    let flags = optimality_flags(&wd, dual.d);
    let claimed = theorem.claimed_flags().to_vec();
    let mut notes = Vec::new();

    let consistent = pred.is_consistent();
    if !consistent {
        notes.push("predicted distribution is internally inconsistent".into());
    }
    let params_ok = pred.n == wd.n
        && pred.k == wd.k
        && match wd.min_distance() {
            Some(d) if pred.d_exact => d == pred.d,
            Some(d) => d >= pred.d,
            None => false,
        };
    let dist_ok = match &pred.distribution {
        Some(p) => p.counts == wd.counts,
        None => true,
    };
    if pred.distribution.is_none() {
        notes.push(if pred.d_exact {
            "parameters only; no closed-form distribution".into()
        } else {
            "parameters only; d is a lower bound".into()
        });
    }
    if theorem == TheoremId::Thm6_9 && param < 5 {
        notes.push("m = 3 lies outside the stated range m >= 5; example parameters only".into());
    }
    let dual_ok = theorem.claimed_dual_d().is_none_or(|d| dual.d == Some(d));
    let a3_ok = dual.a3_direct.is_none_or(|x| x == dual.a3);
    if !a3_ok {
        notes.push("power-moment A3 differs from the direct count".into());
    }
    let flags_ok = claimed
        .iter()
        .all(|c| flags.iter().any(|(f, v)| f == c && *v));
    let pass = consistent && params_ok && dist_ok && dual_ok && a3_ok && flags_ok;
    Ok(VerificationReport {
        theorem,
        p,
        param,
        f: label,
        computed: wd,
        predicted: Some(pred),
        dual,
        flags,
        claimed,
        conjecture: None,
        notes,
        pass,
    })
}

/// Measures the code behind a conjecture and records agreement with the
/// conjectured parameters, nine nonzero weights and dual `[n, n - 2m, 3]`.
/// A disagreement is reported, never raised as an error.
pub fn probe_conjecture(conj: TheoremId, m: u32, opts: &EnumOptions) -> Result<VerificationReport> {
    if !conj.is_conjecture() {
        return Err(not_applicable(conj.name(), "not a conjecture"));
    }
    let stated = predicted(conj, 2, m)?;
    let (code, label) = build_code(conj, 2, m)?;
    let wd = weight_distribution_with(&code, opts)?;
    let dual = dual_info(&code, &wd)?;
    let flags = optimality_flags(&wd, dual.d);
    let finding = ConjectureFinding {
        params_agree: stated.n == wd.n && stated.k == wd.k && wd.min_distance() == Some(stated.d),
        nonzero_weights: wd.num_nonzero_weights(),
        weights_agree: wd.num_nonzero_weights() == 9,
        dual_agree: dual.d == Some(3) && dual.k == wd.n - 2 * m as usize,
    };
    let notes = vec![format!(
        "conjectured [{}, {}, {}] with nine nonzero weights",
        stated.n, stated.k, stated.d
    )];
    Ok(VerificationReport {
        theorem: conj,
        p: 2,
        param: m,
        f: label,
        computed: wd,
        predicted: None,
        dual,
        flags,
        claimed: Vec::new(),
        conjecture: Some(finding),
        notes,
        pass: false,
    })
}
