//! Exact arithmetic in GF(p^m).
//!
//! Elements are stored as [`Elem`], the base-p integer encoding of the
//! polynomial-basis coordinate vector: `c_0 + c_1 p + ... + c_{m-1} p^{m-1}`.
//! The prime subfield therefore occupies the encodings `0..p`, and `Elem(1)` is
//! the multiplicative identity in every field.
//!
//! Multiplication goes through discrete-log tables. Addition is XOR for p = 2,
//! integer addition mod p for m = 1 and a Zech-logarithm lookup otherwise.

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest field order the tables are built for.
pub const MAX_FIELD_ORDER: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// A field element in base-p coordinate encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Elem(pub u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// GF(p^m) with its defining primitive polynomial and lookup tables.
///
/// Immutable after construction; share it behind an [`Arc`].
pub struct FiniteField {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, `m + 1` coefficients, low degree first.
    modulus: Vec<u32>,
    /// `antilog[i] = alpha^i` for `0 <= i < q - 1`.
    antilog: Vec<u32>,
    /// `log[x]` for nonzero `x`; `log[0]` is meaningless.
    log: Vec<u32>,
    /// `zech[k] = log(1 + alpha^k)` or `NO_LOG`; only filled for odd p with m > 1.
    zech: Vec<u32>,
    trace: Vec<u8>,
    pow_p: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

/// Builds GF(p^m) using the lexicographically smallest primitive modulus
/// (coefficients compared low degree first).
pub fn make_field(p: u64, m: u32) -> Result<Arc<FiniteField>> {
    FiniteField::new(p, m).map(Arc::new)
}

fn check_params(p: u64, m: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::FieldTooLarge { p, m });
    }
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q.saturating_mul(p);
        if q > MAX_FIELD_ORDER {
            return Err(Error::FieldTooLarge { p, m });
        }
    }
    Ok(q)
}

impl FiniteField {
    pub fn new(p: u64, m: u32) -> Result<Self> {
        let q = check_params(p, m)?;
        let (modulus, antilog) = find_primitive(p as u32, m, q as u32);
        Ok(Self::from_tables(p as u32, m, modulus, antilog))
    }

    fn from_tables(p: u32, m: u32, modulus: Vec<u32>, antilog: Vec<u32>) -> Self {
        let q = antilog.len() as u32 + 1;
        let mut log = vec![0u32; q as usize];
        for (i, &x) in antilog.iter().enumerate() {
            log[x as usize] = i as u32;
        }
        let pow_p = (0..=m).map(|i| p.pow(i)).collect();
        let mut field = FiniteField {
            p,
            m,
            q,
            modulus,
            antilog,
            log,
            zech: Vec::new(),
            trace: Vec::new(),
            pow_p,
        };
        if p != 2 && m > 1 {
            field.zech = (0..q - 1)
                .map(|k| {
                    let s = field.digit_add(1, field.antilog[k as usize]);
                    if s == 0 {
                        NO_LOG
                    } else {
                        field.log[s as usize]
                    }
                })
                .collect();
        }
        field.trace = field.build_trace_table();
        field
    }

    fn build_trace_table(&self) -> Vec<u8> {
        // Tr is GF(p)-linear, so the traces of the basis monomials determine it.
        let basis_traces: Vec<u32> = (0..self.m)
            .map(|i| {
                let x = Elem(self.pow_p[i as usize]);
                let mut acc = Elem::ZERO;
                let mut y = x;
                for _ in 0..self.m {
                    acc = self.add(acc, y);
                    y = self.pow(y, self.p as u64);
                }
                debug_assert!(acc.0 < self.p);
                acc.0
            })
            .collect();
        if self.p == 2 {
            let mask: u32 = basis_traces
                .iter()
                .enumerate()
                .map(|(i, &t)| t << i)
                .sum();
            (0..self.q).map(|x| ((x & mask).count_ones() & 1) as u8).collect()
        } else {
            (0..self.q)
                .map(|x| {
                    let mut v = x;
                    let mut acc = 0u64;
                    for &t in &basis_traces {
                        acc += (v % self.p) as u64 * t as u64;
                        v /= self.p;
                    }
                    (acc % self.p as u64) as u8
                })
                .collect()
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Field order p^m.
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Powers `alpha^0 .. alpha^(q-2)`.
    pub fn antilog_table(&self) -> &[u32] {
        &self.antilog
    }

    pub fn log_table(&self) -> &[u32] {
        &self.log
    }

    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    /// The primitive element alpha (the class of the indeterminate).
    pub fn alpha(&self) -> Elem {
        self.alpha_pow(1)
    }

    #[inline]
    pub fn alpha_pow(&self, i: u64) -> Elem {
        Elem(self.antilog[(i % (self.q as u64 - 1)) as usize])
    }

    /// Discrete log to base alpha, `None` for zero.
    #[inline]
    pub fn log(&self, x: Elem) -> Option<u32> {
        if x.is_zero() {
            None
        } else {
            Some(self.log[x.0 as usize])
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(Elem)
    }

    /// Nonzero elements in the order alpha^0, alpha^1, ..., alpha^(q-2).
    pub fn nonzero_by_log(&self) -> impl Iterator<Item = Elem> + '_ {
        self.antilog.iter().map(|&x| Elem(x))
    }

    pub fn contains(&self, x: Elem) -> bool {
        x.0 < self.q
    }

    /// Coordinates over GF(p) in the polynomial basis, low degree first.
    pub fn digits(&self, x: Elem) -> Vec<u32> {
        let mut v = x.0;
        (0..self.m)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> Elem {
        debug_assert_eq!(digits.len(), self.m as usize);
        Elem(
            digits
                .iter()
                .rev()
                .fold(0u32, |acc, &d| acc * self.p + d % self.p),
        )
    }

    fn digit_add(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        for i in 0..self.m as usize {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * self.pow_p[i];
            a /= self.p;
            b /= self.p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        if self.p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if self.m == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= self.p { s - self.p } else { s });
        }
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let n = self.q - 1;
        let la = self.log[a.0 as usize];
        let lb = self.log[b.0 as usize];
        let k = if lb >= la { lb - la } else { lb + n - la };
        let z = self.zech[k as usize];
        if z == NO_LOG {
            Elem::ZERO
        } else {
            let e = la + z;
            Elem(self.antilog[(if e >= n { e - n } else { e }) as usize])
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        if self.p == 2 || a.is_zero() {
            return a;
        }
        if self.m == 1 {
            return Elem(self.p - a.0);
        }
        let n = self.q - 1;
        let e = self.log[a.0 as usize] + n / 2;
        Elem(self.antilog[(if e >= n { e - n } else { e }) as usize])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.is_zero() || b.is_zero() {
            return Elem::ZERO;
        }
        let n = self.q - 1;
        let e = self.log[a.0 as usize] + self.log[b.0 as usize];
        Elem(self.antilog[(if e >= n { e - n } else { e }) as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(Elem(self.antilog[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e` for a nonnegative exponent; `0^0 = 1`.
    #[inline]
    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.is_zero() {
            return Elem::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        Elem(self.antilog[((l * (e % n)) % n) as usize])
    }

    /// `a^e` for a signed exponent; negative exponents go through the inverse.
    pub fn pow_signed(&self, a: Elem, e: i64) -> Result<Elem> {
        if e >= 0 {
            Ok(self.pow(a, e as u64))
        } else {
            Ok(self.pow(self.inv(a)?, e.unsigned_abs()))
        }
    }

    /// `a^(q-2)`: the inverse on nonzero elements, 0 at 0.
    pub fn pow_inv_or_zero(&self, a: Elem) -> Elem {
        self.pow(a, self.q as u64 - 2 + (self.q == 2) as u64)
    }

    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.p as u64)
    }

    /// Absolute trace Tr_{q/p}, returned as a prime-field element.
    #[inline]
    pub fn abs_trace(&self, a: Elem) -> Elem {
        Elem(self.trace[a.0 as usize] as u32)
    }

    #[inline]
    pub fn trace_u8(&self, a: Elem) -> u8 {
        self.trace[a.0 as usize]
    }

    fn check_divisor(&self, l: u32) -> Result<()> {
        if l == 0 || !self.m.is_multiple_of(l) {
            return Err(Error::NotADivisor { l, m: self.m });
        }
        Ok(())
    }

    /// `x^(p^e)`.
    fn frobenius_pow(&self, x: Elem, e: u32) -> Elem {
        (0..e).fold(x, |y, _| self.frobenius(y))
    }

    /// Relative trace onto GF(p^l): `sum_{i < m/l} x^(p^(l i))`.
    pub fn rel_trace(&self, x: Elem, l: u32) -> Result<Elem> {
        self.check_divisor(l)?;
        let mut acc = Elem::ZERO;
        let mut y = x;
        for _ in 0..self.m / l {
            acc = self.add(acc, y);
            y = self.frobenius_pow(y, l);
        }
        Ok(acc)
    }

    /// True when `x` lies in the subfield GF(p^l), i.e. `x^(p^l) = x`.
    pub fn in_subfield(&self, x: Elem, l: u32) -> bool {
        self.frobenius_pow(x, l) == x
    }

    /// Tr_{p^l/p} of an element of the GF(p^l) subfield.
    pub fn subfield_trace(&self, x: Elem, l: u32) -> Result<Elem> {
        self.check_divisor(l)?;
        if !self.in_subfield(x, l) {
            return Err(Error::NotInSubfield(x.0));
        }
        let mut acc = Elem::ZERO;
        let mut y = x;
        for _ in 0..l {
            acc = self.add(acc, y);
            y = self.frobenius(y);
        }
        Ok(acc)
    }

    /// `x^(p^l + 1)`, the norm onto GF(p^l) when m = 2l.
    pub fn norm_to_subfield(&self, x: Elem, l: u32) -> Result<Elem> {
        if l == 0 || self.m != 2 * l {
            return Err(Error::NotADivisor { l, m: self.m });
        }
        Ok(self.pow(x, self.p.pow(l) as u64 + 1))
    }

    /// Evaluates a polynomial with coefficients in this field (low degree first).
    pub fn eval_poly(&self, coeffs: &[Elem], x: Elem) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, x: Elem) -> Option<u64> {
        let l = self.log(x)? as u64;
        let n = self.q as u64 - 1;
        Some(n / num_integer::gcd(l, n))
    }
}

/// Walks the powers of x modulo the candidate; returns them if x has order q - 1.
fn power_sequence(p: u32, m: u32, q: u32, coeffs: &[u32]) -> Option<Vec<u32>> {
    let n = (q - 1) as usize;
    let mut out = Vec::with_capacity(n);
    if p == 2 {
        let poly: u32 = coeffs.iter().enumerate().map(|(i, &c)| c << i).sum();
        let top = 1u32 << m;
        let mut s = 1u32;
        for step in 0..n {
            if step > 0 && s == 1 {
                return None;
            }
            out.push(s);
            s <<= 1;
            if s & top != 0 {
                s ^= top | poly;
            }
        }
        return (s == 1).then_some(out);
    }
    let mut state = vec![0u32; m as usize];
    state[0] = 1;
    let encode = |st: &[u32]| st.iter().rev().fold(0u32, |acc, &d| acc * p + d);
    for step in 0..n {
        let e = encode(&state);
        if step > 0 && e == 1 {
            return None;
        }
        out.push(e);
        let top = state[m as usize - 1];
        for j in (1..m as usize).rev() {
            state[j] = state[j - 1];
        }
        state[0] = 0;
        if top != 0 {
            for j in 0..m as usize {
                let t = (top as u64 * coeffs[j] as u64 % p as u64) as u32;
                state[j] = (state[j] + p - t) % p;
            }
        }
    }
    (encode(&state) == 1).then_some(out)
}

fn find_primitive(p: u32, m: u32, q: u32) -> (Vec<u32>, Vec<u32>) {
    // Candidates ordered by (c_0, c_1, ..., c_{m-1}) lexicographically.
    for n in 0..q {
        let coeffs: Vec<u32> = (0..m)
            .map(|j| (n / p.pow(m - 1 - j)) % p)
            .collect();
        if coeffs[0] == 0 {
            continue;
        }
        if let Some(antilog) = power_sequence(p, m, q, &coeffs) {
            let mut modulus = coeffs;
            modulus.push(1);
            return (modulus, antilog);
        }
    }
    unreachable!("every finite field has a primitive polynomial")
}

/// A field element bound to its field, with checked arithmetic.
#[derive(Clone, Debug)]
pub struct FieldElement {
    field: Arc<FiniteField>,
    value: Elem,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.value == other.value
    }
}

fn same_field(a: &Arc<FiniteField>, b: &Arc<FiniteField>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl FieldElement {
    pub fn new(field: &Arc<FiniteField>, value: Elem) -> Result<Self> {
        if !field.contains(value) {
            return Err(Error::MixedFields);
        }
        Ok(Self {
            field: Arc::clone(field),
            value,
        })
    }

    pub fn from_coeffs(field: &Arc<FiniteField>, coeffs: &[u32]) -> Result<Self> {
        if coeffs.len() != field.m() as usize || coeffs.iter().any(|&c| c >= field.p()) {
            return Err(Error::Shape(format!(
                "expected {} coefficients in [0, {})",
                field.m(),
                field.p()
            )));
        }
        Self::new(field, field.from_digits(coeffs))
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    pub fn value(&self) -> Elem {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.digits(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn bin(&self, other: &Self, op: impl Fn(&FiniteField, Elem, Elem) -> Result<Elem>) -> Result<Self> {
        if !same_field(&self.field, &other.field) {
            return Err(Error::MixedFields);
        }
        Ok(Self {
            field: Arc::clone(&self.field),
            value: op(&self.field, self.value, other.value)?,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.bin(other, |f, a, b| Ok(f.add(a, b)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.bin(other, |f, a, b| Ok(f.sub(a, b)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.bin(other, |f, a, b| Ok(f.mul(a, b)))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.bin(other, |f, a, b| f.div(a, b))
    }

    pub fn neg(&self) -> Self {
        Self {
            field: Arc::clone(&self.field),
            value: self.field.neg(self.value),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(Self {
            field: Arc::clone(&self.field),
            value: self.field.inv(self.value)?,
        })
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        Ok(Self {
            field: Arc::clone(&self.field),
            value: self.field.pow_signed(self.value, e)?,
        })
    }

    pub fn abs_trace(&self) -> u32 {
        self.field.abs_trace(self.value).0
    }
}

/// The field homomorphism GF(p^l) -> GF(p^m) for l | m.
#[derive(Debug, Clone)]
pub struct SubfieldEmbedding {
    sub: Arc<FiniteField>,
    image: Vec<Elem>,
    preimage: HashMap<Elem, Elem>,
}

impl SubfieldEmbedding {
    pub fn subfield(&self) -> &Arc<FiniteField> {
        &self.sub
    }

    pub fn embed(&self, x: Elem) -> Elem {
        self.image[x.0 as usize]
    }

    pub fn preimage(&self, y: Elem) -> Option<Elem> {
        self.preimage.get(&y).copied()
    }

    /// Embedded subfield elements, indexed by their encoding in the subfield.
    pub fn image(&self) -> &[Elem] {
        &self.image
    }
}

/// Embeds the standalone GF(p^l) into `field` by sending its primitive element
/// to the first root of its modulus among `alpha^((q-1)/(p^l-1) j)`.
pub fn subfield_embed(field: &Arc<FiniteField>, l: u32) -> Result<SubfieldEmbedding> {
    field.check_divisor(l)?;
    let sub = make_field(field.p() as u64, l)?;
    let sub_n = sub.q() as u64 - 1;
    let step = (field.q() as u64 - 1) / sub_n;
    let coeffs: Vec<Elem> = sub.modulus().iter().map(|&c| Elem(c)).collect();
    let root = (1..=sub_n.max(1))
        .filter(|&j| num_integer::gcd(j, sub_n) == 1)
        .map(|j| field.alpha_pow(step * j))
        .find(|&r| field.eval_poly(&coeffs, r).is_zero())
        .expect("the subfield modulus splits in the extension");
    let mut image = vec![Elem::ZERO; sub.q() as usize];
    for i in 0..sub_n {
        let x = sub.alpha_pow(i);
        image[x.0 as usize] = field.pow(root, i);
    }
    let preimage = image
        .iter()
        .enumerate()
        .map(|(i, &y)| (y, Elem(i as u32)))
        .collect();
    Ok(SubfieldEmbedding {
        sub,
        image,
        preimage,
    })
}

const CACHE_MAGIC: &[u8; 4] = b"SFCF";
pub const CACHE_VERSION: u16 = 1;

/// Writes the modulus and antilog table. The stored antilog table has q
/// entries: alpha^0 .. alpha^(q-2) followed by the zero element.
pub fn save_tables(field: &FiniteField, path: impl AsRef<Path>) -> Result<()> {
    let mut payload = Vec::with_capacity(16 + 8 * (field.q as usize + field.m as usize + 1));
    payload.extend_from_slice(&(field.p as u64).to_le_bytes());
    payload.extend_from_slice(&field.m.to_le_bytes());
    for &c in &field.modulus {
        payload.extend_from_slice(&(c as u64).to_le_bytes());
    }
    for &x in field.antilog.iter().chain(std::iter::once(&0)) {
        payload.extend_from_slice(&(x as u64).to_le_bytes());
    }
    let crc = crc32fast::hash(&payload);
    let mut file = fs::File::create(path)?;
    file.write_all(CACHE_MAGIC)?;
    file.write_all(&CACHE_VERSION.to_le_bytes())?;
    file.write_all(&payload)?;
    file.write_all(&crc.to_le_bytes())?;
    Ok(())
}

fn read_u64(buf: &[u8], pos: &mut usize) -> Result<u64> {
    let bytes = buf
        .get(*pos..*pos + 8)
        .ok_or_else(|| Error::CorruptTable("truncated".into()))?;
    *pos += 8;
    Ok(u64::from_le_bytes(bytes.try_into().unwrap()))
}

/// Loads a cached field, checking it holds GF(p^m).
pub fn load_tables(path: impl AsRef<Path>, p: u64, m: u32) -> Result<Arc<FiniteField>> {
    let mut raw = Vec::new();
    fs::File::open(path)?.read_to_end(&mut raw)?;
    if raw.len() < 4 + 2 + 12 + 4 || &raw[..4] != CACHE_MAGIC {
        return Err(Error::CorruptTable("bad header".into()));
    }
    let version = u16::from_le_bytes([raw[4], raw[5]]);
    if version != CACHE_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: CACHE_VERSION,
        });
    }
    let (payload, crc_bytes) = raw[6..].split_at(raw.len() - 6 - 4);
    if crc32fast::hash(payload) != u32::from_le_bytes(crc_bytes.try_into().unwrap()) {
        return Err(Error::CorruptTable("checksum mismatch".into()));
    }
    let mut pos = 0usize;
    let fp = read_u64(payload, &mut pos)?;
    let fm = u32::from_le_bytes(
        payload
            .get(8..12)
            .ok_or_else(|| Error::CorruptTable("truncated".into()))?
            .try_into()
            .unwrap(),
    );
    pos += 4;
    if fp != p || fm != m {
        return Err(Error::FieldMismatch {
            p,
            m,
            found_p: fp,
            found_m: fm,
        });
    }
    let q = check_params(p, m)? as u32;
    let modulus = (0..=m)
        .map(|_| read_u64(payload, &mut pos).map(|c| c as u32))
        .collect::<Result<Vec<_>>>()?;
    let mut antilog = (0..q)
        .map(|_| read_u64(payload, &mut pos).map(|c| c as u32))
        .collect::<Result<Vec<_>>>()?;
    if pos != payload.len() || antilog.pop() != Some(0) {
        return Err(Error::CorruptTable("unexpected table length".into()));
    }
    if modulus[m as usize] != 1 {
        return Err(Error::CorruptTable("modulus is not monic".into()));
    }
    let expected = power_sequence(p as u32, m, q, &modulus[..m as usize])
        .ok_or_else(|| Error::CorruptTable("modulus is not primitive".into()))?;
    if expected != antilog {
        return Err(Error::CorruptTable("antilog table disagrees with modulus".into()));
    }
    Ok(Arc::new(FiniteField::from_tables(p as u32, m, modulus, antilog)))
}
