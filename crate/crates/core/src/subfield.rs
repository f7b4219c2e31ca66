//! GF(p) subfield codes by generator expansion and by trace representation,
//! plus Walsh-transform weights for p = 2.

use std::sync::Arc;

use crate::construct::{build_g, PolySpec};
use crate::error::{Error, Result};
use crate::galois::{make_field, subfield_embed, Elem, FiniteField, SubfieldEmbedding};
use crate::lincode::{GenMatrix, LinearCode};

/// A basis of GF(p^m) over GF(p) with its inverse coordinate matrix.
#[derive(Clone, Debug)]
pub struct Basis {
    field: Arc<FiniteField>,
    elems: Vec<Elem>,
    /// `inv[i][j]`: coordinate `i` picks up `inv[i][j] * digit_j`.
    inv: Vec<Vec<u32>>,
}

fn invert_mod_p(mat: &[Vec<u32>], p: u32) -> Option<Vec<Vec<u32>>> {
    let m = mat.len();
    let p64 = p as u64;
    let inv_mod = |a: u32| -> u32 {
        let mut r = 1u64;
        let (mut b, mut e) = (a as u64, p64 - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p64;
            }
            b = b * b % p64;
            e >>= 1;
        }
        r as u32
    };
    let mut a: Vec<Vec<u32>> = mat
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..m).map(|j| u32::from(i == j)));
            r
        })
        .collect();
    for c in 0..m {
        let piv = (c..m).find(|&r| a[r][c] != 0)?;
        a.swap(c, piv);
        let s = inv_mod(a[c][c]) as u64;
        for v in a[c].iter_mut() {
            *v = (*v as u64 * s % p64) as u32;
        }
        for r in 0..m {
            if r != c && a[r][c] != 0 {
                let t = a[r][c] as u64;
                let pivot = a[c].clone();
                for (x, &y) in a[r].iter_mut().zip(&pivot) {
                    *x = ((*x as u64 + (p64 - t) * y as u64) % p64) as u32;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[m..].to_vec()).collect())
}

impl Basis {
    pub fn new(field: &Arc<FiniteField>, elems: Vec<Elem>) -> Result<Self> {
        let m = field.m() as usize;
        if elems.len() != m {
            return Err(Error::InvalidBasis(format!("expected {m} elements, got {}", elems.len())));
        }
        if elems.iter().any(|&e| !field.contains(e)) {
            return Err(Error::InvalidBasis("element outside the field".into()));
        }
        // columns are the digit vectors of the basis elements
        let cols: Vec<Vec<u32>> = elems.iter().map(|&e| field.digits(e)).collect();
        let mat: Vec<Vec<u32>> = (0..m).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
        let inv = invert_mod_p(&mat, field.p())
            .ok_or_else(|| Error::InvalidBasis("elements are linearly dependent over GF(p)".into()))?;
        Ok(Self {
            field: Arc::clone(field),
            elems,
            inv,
        })
    }

    /// `(1, alpha, ..., alpha^(m-1))`.
    pub fn polynomial(field: &Arc<FiniteField>) -> Self {
        Self::shifted(field, 0)
    }

    /// `alpha^j * (1, alpha, ..., alpha^(m-1))`.
    pub fn shifted(field: &Arc<FiniteField>, j: u64) -> Self {
        let elems = (0..field.m() as u64).map(|i| field.alpha_pow(i + j)).collect();
        Self::new(field, elems).expect("scaled polynomial basis is independent")
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elems
    }

    /// Coordinates of `x` over GF(p).
    pub fn coords(&self, x: Elem) -> Vec<u32> {
        let p = self.field.p() as u64;
        let d = self.field.digits(x);
        self.inv
            .iter()
            .map(|row| (row.iter().zip(&d).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % p) as u32)
            .collect()
    }
}

/// Replaces every entry by its coordinate column over `basis`.
pub fn expand_subfield(code: &LinearCode, basis: &Basis) -> Result<LinearCode> {
    let field = code.field();
    if **basis.field() != **field {
        return Err(Error::InvalidBasis("basis belongs to a different field".into()));
    }
    let m = field.m() as usize;
    let prime = make_field(field.p() as u64, 1)?;
    let g = code.gen();
    let mut rows = Vec::with_capacity(g.rows() * m);
    for r in 0..g.rows() {
        let coords: Vec<Vec<u32>> = g.row(r).iter().map(|&x| basis.coords(x)).collect();
        for i in 0..m {
            rows.push(coords.iter().map(|c| Elem(c[i])).collect());
        }
    }
    Ok(LinearCode::new(GenMatrix::from_rows(&prime, &rows)?))
}

/// Subfield code of `C_(f,q)` under the polynomial basis.
pub fn subfield_code(f: &PolySpec) -> Result<LinearCode> {
    let field = f.field();
    expand_subfield(&LinearCode::new(build_g(f)), &Basis::polynomial(field))
}

/// Range of the coefficient `a` in the trace representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ADomain {
    #[default]
    Full,
    /// `a` ranges over the embedded GF(p^l).
    Subfield(u32),
}

/// Evaluates trace-representation codewords for one `f` and `a`-domain.
pub struct TraceCode {
    f: PolySpec,
    domain: ADomain,
    emb: Option<SubfieldEmbedding>,
}

impl TraceCode {
    pub fn new(f: &PolySpec, domain: ADomain) -> Result<Self> {
        let emb = match domain {
            ADomain::Full => None,
            ADomain::Subfield(l) => Some(subfield_embed(f.field(), l)?),
        };
        Ok(Self {
            f: f.clone(),
            domain,
            emb,
        })
    }

    pub fn domain(&self) -> ADomain {
        self.domain
    }

    /// Elements of GF(q) that `a` ranges over.
    pub fn a_values(&self) -> Vec<Elem> {
        match &self.emb {
            None => self.f.field().elements().collect(),
            Some(e) => e.image().to_vec(),
        }
    }

    fn a_basis(&self) -> Vec<Elem> {
        match &self.emb {
            None => Basis::polynomial(self.f.field()).elements().to_vec(),
            Some(e) => {
                let sub = e.subfield();
                (0..sub.m() as u64).map(|i| e.embed(sub.alpha_pow(i))).collect()
            }
        }
    }

    fn dom_trace(&self, a: Elem) -> Result<Elem> {
        match &self.emb {
            None => Ok(self.f.field().abs_trace(a)),
            Some(e) => {
                let pre = e.preimage(a).ok_or(Error::NotInSubfield(a.0))?;
                Ok(e.subfield().abs_trace(pre))
            }
        }
    }

    /// `((Tr_dom(a f(x)) + Tr(b x))_{x = alpha^0..alpha^(q-2)}, Tr(b), Tr_dom(a))`.
    /// With a subfield domain, `f` must take values in that subfield.
    pub fn codeword(&self, a: Elem, b: Elem) -> Result<Vec<Elem>> {
        let field = self.f.field();
        let mut w = Vec::with_capacity(field.q() as usize + 1);
        for x in field.nonzero_by_log() {
            let ta = self.dom_trace(field.mul(a, self.f.eval(x)))?;
            w.push(field.add(ta, field.abs_trace(field.mul(b, x))));
        }
        w.push(field.abs_trace(b));
        w.push(self.dom_trace(a)?);
        Ok(w)
    }

    pub fn code(&self) -> Result<LinearCode> {
        let field = self.f.field();
        let prime = make_field(field.p() as u64, 1)?;
        let mut rows = Vec::new();
        for a in self.a_basis() {
            rows.push(self.codeword(a, Elem::ZERO)?);
        }
        for b in Basis::polynomial(field).elements() {
            rows.push(self.codeword(Elem::ZERO, *b)?);
        }
        Ok(LinearCode::new(GenMatrix::from_rows(&prime, &rows)?))
    }
}

pub fn trace_code(f: &PolySpec, domain: ADomain) -> Result<LinearCode> {
    TraceCode::new(f, domain)?.code()
}

/// Compares two codes as sorted codeword lists.
pub fn same_code_set(c1: &LinearCode, c2: &LinearCode, budget: u128) -> Result<bool> {
    if c1.length() != c2.length() || c1.field().q() != c2.field().q() {
        return Ok(false);
    }
    if c1.dimension() != c2.dimension() {
        return Ok(false);
    }
    Ok(c1.codewords(budget)? == c2.codewords(budget)?)
}

fn check_walsh_pre(f: &PolySpec) -> Result<()> {
    if f.field().p() != 2 {
        return Err(Error::OddCharacteristic);
    }
    if !f.eval(Elem::ZERO).is_zero() {
        return Err(Error::NonzeroAtZero);
    }
    Ok(())
}

/// `W_f(a, b) = sum_x (-1)^Tr(a f(x) + b x)`.
pub fn walsh(f: &PolySpec, a: Elem, b: Elem) -> Result<i64> {
    check_walsh_pre(f)?;
    let field = f.field();
    Ok(field
        .elements()
        .map(|x| {
            let t = field.trace_u8(field.add(field.mul(a, f.eval(x)), field.mul(b, x)));
            1 - 2 * t as i64
        })
        .sum())
}

/// Weight of the trace codeword for `(a, b)` from the Walsh value.
pub fn weight_via_walsh(f: &PolySpec, a: Elem, b: Elem) -> Result<u64> {
    let w = walsh(f, a, b)?;
    let field = f.field();
    let q = field.q() as i64;
    let extra = field.trace_u8(a) as i64 + field.trace_u8(b) as i64;
    Ok((q / 2 - w / 2 + extra) as u64)
}
