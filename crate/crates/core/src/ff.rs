//! Arithmetic in GF(p) and GF(p^m).
//!
//! Elements are packed base-p integers: the index of an element is
//! `c0 + c1*p + ... + c_{m-1}*p^{m-1}` for the representative polynomial
//! `c0 + c1*x + ... + c_{m-1}*x^{m-1}` modulo the field's modulus. Index 0
//! is zero and index 1 is one in every field.
//!
//! Small fields (q <= 256) carry full addition/multiplication tables and
//! fields up to 2^16 elements carry log/antilog tables. The tables are only
//! a speedup; every operation has a table-free path with identical results.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported extension field order (log tables are always built).
pub const MAX_EXTENSION_ORDER: u64 = 1 << 20;
const LOG_TABLE_LIMIT: u64 = 1 << 16;
const SMALL_TABLE_LIMIT: u64 = 256;

/// A field element, identified by its index in `[0, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Felt(pub(crate) u32);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    #[inline]
    pub fn index(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The operation selector of [`Field::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow(i64),
}

struct SmallTables {
    q: usize,
    add: Vec<u8>,
    sub: Vec<u8>,
    mul: Vec<u8>,
    inv: Vec<u8>,
}

struct LogTables {
    // exp has length 2(q-1) so that exp[log a + log b] needs no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    default_modulus: bool,
    generator: Felt,
    small: Option<SmallTables>,
    logs: Option<LogTables>,
}

/// A finite field GF(p^m) with a fixed modulus polynomial.
///
/// Cloning is cheap (shared immutable state).
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.m == other.inner.m
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.m == 1 {
            write!(f, "GF({})", self.inner.p)
        } else {
            write!(
                f,
                "GF({}^{}; modulus {:?})",
                self.inner.p, self.inner.m, self.inner.modulus
            )
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.m == 1 {
            write!(f, "GF({})", self.inner.p)
        } else {
            write!(f, "GF({}^{})", self.inner.p, self.inner.m)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Raw polynomial arithmetic over GF(p) on coefficient vectors (constant first).
// Used to build tables and to validate user moduli.
struct RawPoly {
    p: u64,
}

impl RawPoly {
    fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    fn inv(&self, a: u64) -> u64 {
        // a^(p-2) mod p
        let mut base = a % self.p;
        let mut e = self.p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        acc
    }

    /// Remainder of `a` modulo the nonzero polynomial `b`.
    fn rem(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut r = a.to_vec();
        Self::trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = self.inv(b[db]);
        while r.len() > db {
            let dr = r.len() - 1;
            let coef = r[dr] * lead_inv % self.p;
            for (i, &bc) in b.iter().enumerate() {
                let idx = dr - db + i;
                r[idx] = (r[idx] + self.p - coef * bc % self.p) % self.p;
            }
            Self::trim(&mut r);
        }
        r
    }
}

impl Field {
    /// Builds GF(p^m).
    ///
    /// With `modulus == None` and `m > 1` the lexicographically smallest
    /// primitive monic polynomial is used, ordering candidates by their
    /// coefficient tuple read from the constant term upward. A supplied
    /// modulus is a coefficient list (constant term first) of length `m+1`,
    /// must be monic and irreducible, and is ignored for `m == 1`.
    pub fn new(p: u64, m: u32, modulus: Option<&[u64]>) -> Result<Field> {
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        if !is_prime(p) {
            return Err(Error::NonPrime(p));
        }
        if p > (1u64 << 31) {
            return Err(Error::FieldTooLarge(p as u128));
        }
        let q = (p as u128).pow(m);
        if m > 1 && q > MAX_EXTENSION_ORDER as u128 {
            return Err(Error::FieldTooLarge(q));
        }
        let q = q as u64;
        let raw = RawPoly { p };

        let (modulus, default_modulus) = if m == 1 {
            (vec![0u64, 1], true)
        } else if let Some(given) = modulus {
            if given.len() != m as usize + 1 {
                return Err(Error::InvalidModulus(format!(
                    "expected {} coefficients, got {}",
                    m + 1,
                    given.len()
                )));
            }
            if given.iter().any(|&c| c >= p) {
                return Err(Error::InvalidModulus("coefficient out of range".into()));
            }
            if given[m as usize] != 1 {
                return Err(Error::InvalidModulus("modulus is not monic".into()));
            }
            if !Self::irreducible(&raw, given) {
                return Err(Error::InvalidModulus("modulus is reducible".into()));
            }
            (given.to_vec(), false)
        } else {
            (Self::default_primitive(&raw, m as usize, q), true)
        };

        let mut inner = Inner {
            p: p as u32,
            m,
            q: q as u32,
            modulus: modulus.iter().map(|&c| c as u32).collect(),
            default_modulus,
            generator: Felt::ONE,
            small: None,
            logs: None,
        };
        inner.generator = if m > 1 && default_modulus {
            Felt(p as u32)
        } else {
            inner.smallest_generator()
        };
        if q <= LOG_TABLE_LIMIT || m > 1 {
            inner.logs = Some(inner.build_logs());
        }
        if q <= SMALL_TABLE_LIMIT {
            inner.small = Some(inner.build_small());
        }
        Ok(Field {
            inner: Arc::new(inner),
        })
    }

    /// GF(p) shorthand.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    fn irreducible(raw: &RawPoly, f: &[u64]) -> bool {
        let m = f.len() - 1;
        let p = raw.p;
        // Trial division by every monic polynomial of degree 1..=m/2.
        for d in 1..=m / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut x = idx;
                for _ in 0..d {
                    g.push(x % p);
                    x /= p;
                }
                g.push(1);
                if raw.rem(f, &g).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    fn default_primitive(raw: &RawPoly, m: usize, q: u64) -> Vec<u64> {
        let p = raw.p;
        let factors = prime_factors(q - 1);
        let count = p.pow(m as u32);
        // Lexicographic order on (c0, c1, ..., c_{m-1}) with c0 most significant.
        for n in 0..count {
            let mut coeffs = vec![0u64; m + 1];
            let mut x = n;
            for i in (0..m).rev() {
                coeffs[i] = x % p;
                x /= p;
            }
            coeffs[m] = 1;
            if coeffs[0] == 0 {
                continue;
            }
            // x has order exactly q-1 in GF(p)[x]/(f) iff f is primitive.
            let order_ok = Self::raw_pow_x(raw, &coeffs, q - 1) == [1]
                && factors
                    .iter()
                    .all(|&r| Self::raw_pow_x(raw, &coeffs, (q - 1) / r) != [1]);
            if order_ok {
                return coeffs;
            }
        }
        unreachable!("a primitive polynomial of every degree exists")
    }

    fn raw_pow_x(raw: &RawPoly, f: &[u64], mut e: u64) -> Vec<u64> {
        let p = raw.p;
        let mulmod = |a: &[u64], b: &[u64]| -> Vec<u64> {
            if a.is_empty() || b.is_empty() {
                return Vec::new();
            }
            let mut out = vec![0u64; a.len() + b.len() - 1];
            for (i, &x) in a.iter().enumerate() {
                for (j, &y) in b.iter().enumerate() {
                    out[i + j] = (out[i + j] + x * y) % p;
                }
            }
            raw.rem(&out, f)
        };
        let mut acc = vec![1u64];
        let mut base = raw.rem(&[0, 1], f);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &base);
            }
            base = mulmod(&base, &base);
            e >>= 1;
        }
        acc
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.inner.m
    }

    /// Number of elements q = p^m.
    #[inline]
    pub fn order(&self) -> u32 {
        self.inner.q
    }

    /// Modulus coefficients, constant term first (`[0, 1]` for prime fields).
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn has_default_modulus(&self) -> bool {
        self.inner.default_modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.inner.m == 1
    }

    /// Checked conversion from an index.
    pub fn element(&self, index: u64) -> Result<Felt> {
        if index < self.inner.q as u64 {
            Ok(Felt(index as u32))
        } else {
            Err(Error::Index(format!(
                "element index {index} out of range for {self}"
            )))
        }
    }

    /// The image of an integer under Z -> GF(p) -> GF(q).
    pub fn from_int(&self, v: i64) -> Felt {
        let p = self.inner.p as i64;
        Felt(v.rem_euclid(p) as u32)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Felt> {
        (0..self.inner.q).map(Felt)
    }

    /// Base-p coefficient vector of an element (length m, constant first).
    pub fn to_coeffs(&self, a: Felt) -> Vec<u32> {
        let p = self.inner.p;
        let mut x = a.0;
        (0..self.inner.m)
            .map(|_| {
                let c = x % p;
                x /= p;
                c
            })
            .collect()
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Felt> {
        if coeffs.len() > self.inner.m as usize {
            return Err(Error::Parse(format!(
                "coefficient vector longer than extension degree {}",
                self.inner.m
            )));
        }
        let p = self.inner.p as u64;
        let mut idx = 0u64;
        for &c in coeffs.iter().rev() {
            if c as u64 >= p {
                return Err(Error::Parse(format!("coefficient {c} not below {p}")));
            }
            idx = idx * p + c as u64;
        }
        Ok(Felt(idx as u32))
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        let f = &*self.inner;
        if let Some(t) = &f.small {
            return Felt(t.add[a.0 as usize * t.q + b.0 as usize] as u32);
        }
        f.add_raw(a, b)
    }

    #[inline]
    pub fn sub(&self, a: Felt, b: Felt) -> Felt {
        let f = &*self.inner;
        if let Some(t) = &f.small {
            return Felt(t.sub[a.0 as usize * t.q + b.0 as usize] as u32);
        }
        f.sub_raw(a, b)
    }

    #[inline]
    pub fn neg(&self, a: Felt) -> Felt {
        self.sub(Felt::ZERO, a)
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        let f = &*self.inner;
        if let Some(t) = &f.small {
            return Felt(t.mul[a.0 as usize * t.q + b.0 as usize] as u32);
        }
        if f.m == 1 {
            return Felt((a.0 as u64 * b.0 as u64 % f.p as u64) as u32);
        }
        if a.is_zero() || b.is_zero() {
            return Felt::ZERO;
        }
        let logs = f.logs.as_ref().expect("extension fields carry log tables");
        Felt(logs.exp[(logs.log[a.0 as usize] + logs.log[b.0 as usize]) as usize])
    }

    /// `a + b*c`.
    #[inline]
    pub fn mul_add(&self, a: Felt, b: Felt, c: Felt) -> Felt {
        self.add(a, self.mul(b, c))
    }

    pub fn inv(&self, a: Felt) -> Result<Felt> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_nonzero(a))
    }

    /// Inverse of an element known to be nonzero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: Felt) -> Felt {
        debug_assert!(!a.is_zero());
        let f = &*self.inner;
        if let Some(t) = &f.small {
            return Felt(t.inv[a.0 as usize] as u32);
        }
        if let Some(logs) = &f.logs {
            let l = logs.log[a.0 as usize];
            let qm1 = f.q - 1;
            return Felt(logs.exp[((qm1 - l) % qm1) as usize]);
        }
        f.pow_raw(a, f.q as u64 - 2)
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`; negative exponents require a nonzero base.
    pub fn pow(&self, a: Felt, e: i64) -> Result<Felt> {
        if e < 0 {
            let inv = self.inv(a)?;
            return Ok(self.pow_u(inv, e.unsigned_abs()));
        }
        Ok(self.pow_u(a, e as u64))
    }

    /// `a^e` by square-and-multiply (`0^0 = 1`).
    pub fn pow_u(&self, a: Felt, mut e: u64) -> Felt {
        let mut base = a;
        let mut acc = Felt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Dispatches one of the field operations by name. `b` is the second
    /// operand for binary operations and is ignored otherwise.
    pub fn arith(&self, op: ArithOp, a: Felt, b: Felt) -> Result<Felt> {
        self.check(a)?;
        self.check(b)?;
        match op {
            ArithOp::Add => Ok(self.add(a, b)),
            ArithOp::Sub => Ok(self.sub(a, b)),
            ArithOp::Mul => Ok(self.mul(a, b)),
            ArithOp::Div => self.div(a, b),
            ArithOp::Neg => Ok(self.neg(a)),
            ArithOp::Inv => self.inv(a),
            ArithOp::Pow(e) => self.pow(a, e),
        }
    }

    fn check(&self, a: Felt) -> Result<()> {
        if a.0 < self.inner.q {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Fixed generator of the multiplicative group: the class of `x` for
    /// extension fields with the default modulus, otherwise the
    /// smallest-index element of order q-1.
    pub fn primitive_root(&self) -> Felt {
        self.inner.generator
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Felt) -> Result<u64> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.inner.q as u64 - 1;
        let mut order = n;
        for r in prime_factors(n) {
            while order.is_multiple_of(r) && self.pow_u(a, order / r) == Felt::ONE {
                order /= r;
            }
        }
        Ok(order)
    }

    /// Discrete logarithm to the base [`Field::primitive_root`].
    pub fn log(&self, a: Felt) -> Option<u32> {
        if a.is_zero() {
            return None;
        }
        if let Some(logs) = &self.inner.logs {
            return Some(logs.log[a.0 as usize]);
        }
        // Large prime fields: baby-step giant-step.
        let n = self.inner.q as u64 - 1;
        let step = (n as f64).sqrt().ceil() as u64;
        let g = self.inner.generator;
        let mut table = std::collections::HashMap::with_capacity(step as usize);
        let mut cur = Felt::ONE;
        for j in 0..step {
            table.entry(cur).or_insert(j);
            cur = self.mul(cur, g);
        }
        let giant = self.inv_nonzero(self.pow_u(g, step));
        let mut gamma = a;
        for i in 0..=step {
            if let Some(&j) = table.get(&gamma) {
                return Some(((i * step + j) % n) as u32);
            }
            gamma = self.mul(gamma, giant);
        }
        None
    }

    /// Canonical text form: decimal for prime fields, `0` or `z^k` otherwise.
    pub fn format(&self, a: Felt) -> String {
        if self.inner.m == 1 {
            return a.0.to_string();
        }
        match self.log(a) {
            None => "0".to_string(),
            Some(k) => format!("z^{k}"),
        }
    }

    /// Parses an element. Accepted forms: decimal integers (reduced into the
    /// prime subfield), `z`, `z^k` (powers of the primitive root, `k` may be
    /// negative) and coefficient vectors `[c0,c1,...]`.
    pub fn parse(&self, text: &str) -> Result<Felt> {
        let t = text.trim();
        if t.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        if let Some(body) = t.strip_prefix('[') {
            let body = body
                .strip_suffix(']')
                .ok_or_else(|| Error::Parse(format!("unterminated vector `{t}`")))?;
            let coeffs = body
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    s.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad coefficient `{s}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            return self.from_coeffs(&coeffs);
        }
        if let Some(rest) = t.strip_prefix('z') {
            let rest = rest.trim();
            let exp: i64 = if rest.is_empty() {
                1
            } else {
                let e = rest
                    .strip_prefix("^")
                    .or_else(|| rest.strip_prefix("**"))
                    .ok_or_else(|| Error::Parse(format!("bad element `{t}`")))?;
                e.trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{t}`")))?
            };
            return self.pow(self.inner.generator, exp);
        }
        let v: i128 = t
            .parse()
            .map_err(|_| Error::Parse(format!("bad element `{t}`")))?;
        Ok(Felt(v.rem_euclid(self.inner.p as i128) as u32))
    }
}

impl Inner {
    fn add_raw(&self, a: Felt, b: Felt) -> Felt {
        if self.m == 1 {
            let s = a.0 as u64 + b.0 as u64;
            let p = self.p as u64;
            return Felt(if s >= p { s - p } else { s } as u32);
        }
        let p = self.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.m {
            let d = (x % p + y % p) % p;
            out += d * place;
            place = place.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        Felt(out)
    }

    fn sub_raw(&self, a: Felt, b: Felt) -> Felt {
        if self.m == 1 {
            let p = self.p as u64;
            let (x, y) = (a.0 as u64, b.0 as u64);
            return Felt(if x >= y { x - y } else { x + p - y } as u32);
        }
        let p = self.p;
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.m {
            let d = (x % p + p - y % p) % p;
            out += d * place;
            place = place.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        Felt(out)
    }

    fn mul_raw(&self, a: Felt, b: Felt) -> Felt {
        let p = self.p as u64;
        if self.m == 1 {
            return Felt((a.0 as u64 * b.0 as u64 % p) as u32);
        }
        let m = self.m as usize;
        let digits = |mut v: u32| {
            let mut out = vec![0u64; m];
            for d in out.iter_mut() {
                *d = (v % self.p) as u64;
                v /= self.p;
            }
            out
        };
        let (da, db) = (digits(a.0), digits(b.0));
        let mut prod = vec![0u64; 2 * m - 1];
        for i in 0..m {
            for j in 0..m {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        // Reduce with the monic modulus: x^m = -(c0 + ... + c_{m-1} x^{m-1}).
        for deg in (m..2 * m - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for i in 0..m {
                let idx = deg - m + i;
                let sub = c * self.modulus[i] as u64 % p;
                prod[idx] = (prod[idx] + p - sub) % p;
            }
        }
        let mut idx = 0u64;
        for &c in prod[..m].iter().rev() {
            idx = idx * p + c;
        }
        Felt(idx as u32)
    }

    fn pow_raw(&self, a: Felt, mut e: u64) -> Felt {
        let mut base = a;
        let mut acc = Felt::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    fn smallest_generator(&self) -> Felt {
        let n = self.q as u64 - 1;
        if n == 1 {
            return Felt::ONE;
        }
        let factors = prime_factors(n);
        (1..self.q)
            .map(Felt)
            .find(|&g| factors.iter().all(|&r| self.pow_raw(g, n / r) != Felt::ONE))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    fn build_logs(&self) -> LogTables {
        let q = self.q as usize;
        let n = q - 1;
        let mut exp = vec![0u32; 2 * n.max(1)];
        let mut log = vec![0u32; q];
        let mut cur = Felt::ONE;
        for i in 0..n {
            exp[i] = cur.0;
            log[cur.0 as usize] = i as u32;
            cur = self.mul_raw(cur, self.generator);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        LogTables { exp, log }
    }

    fn build_small(&self) -> SmallTables {
        let q = self.q as usize;
        let mut add = vec![0u8; q * q];
        let mut sub = vec![0u8; q * q];
        let mut mul = vec![0u8; q * q];
        let mut inv = vec![0u8; q];
        for a in 0..q {
            for b in 0..q {
                let (x, y) = (Felt(a as u32), Felt(b as u32));
                add[a * q + b] = self.add_raw(x, y).0 as u8;
                sub[a * q + b] = self.sub_raw(x, y).0 as u8;
                mul[a * q + b] = self.mul_raw(x, y).0 as u8;
            }
        }
        for a in 1..q {
            inv[a] = self.pow_raw(Felt(a as u32), q as u64 - 2).0 as u8;
        }
        SmallTables {
            q,
            add,
            sub,
            mul,
            inv,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.order(), 7);
        assert_eq!(f.mul(Felt(3), Felt(5)), Felt(1));
        assert_eq!(f.inv(Felt(0)), Err(Error::DivisionByZero));
        assert_eq!(f.div(Felt(1), Felt(0)), Err(Error::DivisionByZero));
        assert_eq!(f.pow(Felt(0), -1), Err(Error::DivisionByZero));
        assert_eq!(f.pow(Felt(3), -1).unwrap(), Felt(5));
        assert_eq!(f.arith(ArithOp::Mul, Felt(3), Felt(5)).unwrap(), Felt(1));
        assert_eq!(f.arith(ArithOp::Add, Felt(3), Felt(9)), Err(Error::FieldMismatch));
    }

    #[test]
    fn bad_parameters() {
        assert_eq!(Field::new(4, 1, None).err(), Some(Error::NonPrime(4)));
        assert_eq!(Field::new(7, 0, None).err(), Some(Error::ZeroDegree));
        // x^2 + 1 = (x+1)^2 over GF(2)
        assert!(matches!(
            Field::new(2, 2, Some(&[1, 0, 1])),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            Field::new(3, 2, Some(&[2, 1, 2])),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            Field::new(3, 2, Some(&[2, 1])),
            Err(Error::InvalidModulus(_))
        ));
    }

    #[test]
    fn gf9_default_modulus_is_primitive() {
        let f = Field::new(3, 2, None).unwrap();
        assert_eq!(f.modulus(), &[2, 1, 1]);
        let z = f.primitive_root();
        assert_eq!(z, Felt(3));
        // repeated multiplication, not pow
        let mut acc = Felt::ONE;
        let mut powers = vec![acc];
        for _ in 0..8 {
            acc = f.mul(acc, z);
            powers.push(acc);
        }
        assert_eq!(powers[8], Felt::ONE);
        for d in [1, 2, 4] {
            assert_ne!(powers[d], Felt::ONE);
        }
        assert_eq!(f.mul(z, f.pow(z, 7).unwrap()), Felt::ONE);
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(Field::prime(7).unwrap().primitive_root(), Felt(3));
        assert_eq!(Field::prime(2).unwrap().primitive_root(), Felt(1));
        assert_eq!(Field::prime(17).unwrap().primitive_root(), Felt(3));
        let f = Field::new(3, 2, Some(&[1, 0, 1])).unwrap();
        let g = f.primitive_root();
        assert_eq!(f.multiplicative_order(g).unwrap(), 8);
    }

    #[test]
    fn element_text() {
        let f = Field::new(3, 2, None).unwrap();
        assert_eq!(f.format(Felt::ZERO), "0");
        assert_eq!(f.format(Felt::ONE), "z^0");
        for a in f.elements() {
            assert_eq!(f.parse(&f.format(a)).unwrap(), a);
            let coeffs = f.to_coeffs(a);
            let text = format!(
                "[{}]",
                coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
            );
            assert_eq!(f.parse(&text).unwrap(), a);
        }
        // 2 = z^4 for any primitive z of GF(9)
        assert_eq!(f.parse("2").unwrap(), f.parse("z^4").unwrap());
        assert_eq!(f.parse("z").unwrap(), f.primitive_root());
        assert!(f.parse("[1,2,0]").is_err());
        assert!(f.parse("y^2").is_err());

        let g = Field::prime(17).unwrap();
        assert_eq!(g.parse("-1").unwrap(), Felt(16));
        assert_eq!(g.format(Felt(9)), "9");
    }

    #[test]
    fn table_free_paths_agree() {
        // GF(2^9) has log tables but no small tables; GF(5^2) has both.
        for (p, m) in [(2u64, 9u32), (5, 2), (3, 3)] {
            let f = Field::new(p, m, None).unwrap();
            let inner = &*f.inner;
            for a in f.elements().step_by(7) {
                for b in f.elements().step_by(5) {
                    assert_eq!(f.mul(a, b), inner.mul_raw(a, b));
                    assert_eq!(f.add(a, b), inner.add_raw(a, b));
                    assert_eq!(f.sub(a, b), inner.sub_raw(a, b));
                }
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv_nonzero(a)), Felt::ONE);
                }
            }
        }
    }

    #[test]
    fn large_prime_field() {
        let p = 2_147_483_647u64;
        let f = Field::prime(p).unwrap();
        let a = Felt(2_000_000_000);
        let b = f.inv(a).unwrap();
        assert_eq!(f.mul(a, b), Felt::ONE);
        assert_eq!(f.pow_u(a, p - 1), Felt::ONE);
        let g = f.primitive_root();
        assert_eq!(f.multiplicative_order(g).unwrap(), p - 1);
        let x = f.pow_u(g, 123_456_789);
        assert_eq!(f.log(x), Some(123_456_789));
    }
}
