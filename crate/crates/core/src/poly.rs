//! Sparse multivariate polynomials over a finite field.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::ff::{Felt, Field};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u8>;

/// Graded-lex order: total degree first, then lexicographic with `x0` most significant.
pub fn grlex_cmp(a: &[u8], b: &[u8]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Monomial, Felt>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

impl MultiPoly {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        MultiPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &Field, nvars: usize, c: Felt) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> Result<Self> {
        if i >= nvars {
            return Err(Error::Index(format!("variable {i} out of range for {nvars} variables")));
        }
        let mut mono = vec![0; nvars];
        mono[i] = 1;
        let mut p = Self::zero(field, nvars);
        p.add_term(mono, Felt::ONE);
        Ok(p)
    }

    pub fn from_terms(field: &Field, nvars: usize, terms: impl IntoIterator<Item = (Monomial, Felt)>) -> Result<Self> {
        let mut p = Self::zero(field, nvars);
        for (mono, c) in terms {
            if mono.len() != nvars {
                return Err(Error::Dimension(format!(
                    "monomial has {} exponents, expected {nvars}",
                    mono.len()
                )));
            }
            if c.index() >= field.order() {
                return Err(Error::FieldMismatch);
            }
            p.add_term(mono, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, mono: Monomial, c: Felt) {
        if c.is_zero() {
            return;
        }
        let f = &self.field;
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, mono: &[u8]) -> Felt {
        self.terms.get(mono).copied().unwrap_or(Felt::ZERO)
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> Vec<(&Monomial, Felt)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, &c)| (m, c)).collect();
        v.sort_by(|a, b| grlex_cmp(b.0, a.0));
        v
    }

    pub fn leading_term(&self) -> Option<(&Monomial, Felt)> {
        self.terms
            .iter()
            .max_by(|a, b| grlex_cmp(a.0, b.0))
            .map(|(m, &c)| (m, c))
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var] as u32).max().unwrap_or(0)
    }

    /// Largest exponent of any single variable.
    pub fn max_var_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|m| m.iter().map(|&e| e as u32))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum())
            .max()
            .unwrap_or(0)
    }

    fn check_compat(&self, other: &MultiPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.nvars != other.nvars {
            return Err(Error::Dimension(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compat(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), self.field.neg(c));
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(self.field.neg(Felt::ONE))
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compat(other)?;
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                let mono: Monomial = ma
                    .iter()
                    .zip(mb)
                    .map(|(&x, &y)| {
                        x.checked_add(y).ok_or_else(|| {
                            Error::InvalidParams("exponent overflow in polynomial product".into())
                        })
                    })
                    .collect::<Result<_>>()?;
                out.add_term(mono, f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: Felt) -> MultiPoly {
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars);
        if s.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(m, &c)| (m.clone(), f.mul(c, s))).collect();
        out
    }

    /// Scales so the leading graded-lex coefficient is one.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            Some((_, c)) => self.scale(self.field.inv_nonzero(c)),
            None => self.clone(),
        }
    }

    /// `Some(s)` with `self = s * other`, if the two differ by a nonzero scalar.
    pub fn scalar_ratio(&self, other: &MultiPoly) -> Option<Felt> {
        if self.check_compat(other).is_err() || self.len() != other.len() || self.is_zero() {
            return None;
        }
        let (m, c) = self.leading_term()?;
        let oc = other.coeff(m);
        if oc.is_zero() {
            return None;
        }
        let s = self.field.div(c, oc).ok()?;
        (other.scale(s) == *self).then_some(s)
    }

    pub fn eval(&self, point: &[Felt]) -> Result<Felt> {
        if point.len() != self.nvars {
            return Err(Error::Dimension(format!(
                "assignment has {} values, expected {}",
                point.len(),
                self.nvars
            )));
        }
        if point.iter().any(|v| v.index() >= self.field.order()) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.eval_unchecked(point))
    }

    pub(crate) fn eval_unchecked(&self, point: &[Felt]) -> Felt {
        let f = &self.field;
        let mut acc = Felt::ZERO;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (&x, &e) in point.iter().zip(m) {
                if e > 0 {
                    t = f.mul(t, f.pow_u(x, e as u64));
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Default variable names `x0, x1, ...`.
    pub fn default_names(nvars: usize) -> Vec<String> {
        (0..nvars).map(|i| format!("x{i}")).collect()
    }

    /// Canonical text with custom variable names.
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms()
            .into_iter()
            .map(|(m, c)| {
                let mut s = self.field.format(c);
                if self.field.degree() > 1 && !c.is_zero() {
                    s = format!("({s})");
                }
                for (i, &e) in m.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*{}", names[i])),
                        _ => s.push_str(&format!("*{}^{e}", names[i])),
                    }
                }
                s
            })
            .collect();
        parts.join("+")
    }

    /// Parses a polynomial in `x0, x1, ...`.
    pub fn parse(field: &Field, nvars: usize, text: &str) -> Result<MultiPoly> {
        Self::parse_with(field, &Self::default_names(nvars), text)
    }

    /// Lenient parser: whitespace is ignored, `**` is accepted for `^`,
    /// factors may be juxtaposed (`11xy`), and terms may be subtracted.
    /// Coefficients are integers, bracketed coefficient vectors, or
    /// parenthesized field elements such as `(z^3)`.
    pub fn parse_with(field: &Field, names: &[String], text: &str) -> Result<MultiPoly> {
        let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
        let s: String = chars.iter().collect::<String>().replace("**", "^");
        let chars: Vec<char> = s.chars().collect();
        let nvars = names.len();
        let mut by_len: Vec<(usize, &str)> = names.iter().enumerate().map(|(i, n)| (i, n.as_str())).collect();
        by_len.sort_by_key(|e| std::cmp::Reverse(e.1.len()));
        let err = |msg: String| Error::Parse(format!("polynomial: {msg}"));

        let mut out = MultiPoly::zero(field, nvars);
        if chars.is_empty() {
            return Err(err("empty input".into()));
        }
        let mut pos = 0;
        while pos < chars.len() {
            let mut negate = false;
            while pos < chars.len() && (chars[pos] == '+' || chars[pos] == '-') {
                if chars[pos] == '-' {
                    negate = !negate;
                }
                pos += 1;
            }
            let mut coeff = Felt::ONE;
            let mut mono = vec![0u8; nvars];
            let mut factors = 0;
            while pos < chars.len() && chars[pos] != '+' && chars[pos] != '-' {
                if chars[pos] == '*' {
                    pos += 1;
                    continue;
                }
                factors += 1;
                if chars[pos].is_ascii_digit() {
                    let start = pos;
                    while pos < chars.len() && chars[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    let lit: String = chars[start..pos].iter().collect();
                    let mut v = field.parse(&lit)?;
                    if pos < chars.len() && chars[pos] == '^' {
                        pos += 1;
                        let e = read_uint(&chars, &mut pos).ok_or_else(|| err("missing exponent".into()))?;
                        v = field.pow_u(v, e);
                    }
                    coeff = field.mul(coeff, v);
                    continue;
                }
                if chars[pos] == '[' || chars[pos] == '(' {
                    let close = if chars[pos] == '[' { ']' } else { ')' };
                    let end = chars[pos..]
                        .iter()
                        .position(|&c| c == close)
                        .ok_or_else(|| err(format!("unclosed '{}'", chars[pos])))?
                        + pos;
                    let inner: String = if close == ']' {
                        chars[pos..=end].iter().collect()
                    } else {
                        chars[pos + 1..end].iter().collect()
                    };
                    coeff = field.mul(coeff, field.parse(&inner)?);
                    pos = end + 1;
                    continue;
                }
                let rest: String = chars[pos..].iter().collect();
                let Some(&(vi, name)) = by_len.iter().find(|(_, n)| rest.starts_with(n)) else {
                    return Err(err(format!("unexpected input at '{rest}'")));
                };
                pos += name.chars().count();
                let mut e = 1u64;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    e = read_uint(&chars, &mut pos).ok_or_else(|| err("missing exponent".into()))?;
                }
                let total = mono[vi] as u64 + e;
                mono[vi] = u8::try_from(total).map_err(|_| err(format!("exponent {total} too large")))?;
            }
            if factors == 0 {
                return Err(err("empty term".into()));
            }
            if negate {
                coeff = field.neg(coeff);
            }
            out.add_term(mono, coeff);
        }
        Ok(out)
    }
}

fn read_uint(chars: &[char], pos: &mut usize) -> Option<u64> {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    chars[start..*pos].iter().collect::<String>().parse().ok()
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&Self::default_names(self.nvars)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn square_in_char_two() {
        let f = Field::prime(2).unwrap();
        let x1 = MultiPoly::parse(&f, 1, "x0 + 1").unwrap();
        let sq = x1.mul(&x1).unwrap();
        assert_eq!(sq, MultiPoly::parse(&f, 1, "x0^2+1").unwrap());
        assert_eq!(sq.to_string(), "1*x0^2+1");
    }

    #[test]
    fn eval_at_origin() {
        let f = Field::prime(17).unwrap();
        let p = MultiPoly::parse_with(&f, &xy(), "11xy+12x+10y+2").unwrap();
        assert_eq!(p.eval(&[Felt::ZERO, Felt::ZERO]).unwrap(), Felt(2));
        assert_eq!(p.len(), 4);
        assert!(p.eval(&[Felt::ZERO]).is_err());
    }

    #[test]
    fn lenient_forms() {
        let f = Field::prime(17).unwrap();
        let a = MultiPoly::parse_with(&f, &xy(), "7x^6y^5 - 3 x**2 *y + 4").unwrap();
        let b = MultiPoly::parse_with(&f, &xy(), "4+14*x^2*y+7*x^6*y^5").unwrap();
        assert_eq!(a, b);
        assert_eq!(MultiPoly::parse_with(&f, &xy(), &a.to_string_with(&xy())).unwrap(), a);
        assert!(MultiPoly::parse_with(&f, &xy(), "3w").is_err());
        assert!(MultiPoly::parse_with(&f, &xy(), "").is_err());
        assert!(MultiPoly::parse_with(&f, &xy(), "x+").is_err());
    }

    #[test]
    fn grlex_leading() {
        let f = Field::prime(17).unwrap();
        let p = MultiPoly::parse_with(&f, &xy(), "3x^5y^6+7x^6y^5+x^7").unwrap();
        assert_eq!(p.leading_term().unwrap(), (&vec![6, 5], Felt(7)));
        let m = p.monic();
        assert_eq!(m.leading_term().unwrap().1, Felt::ONE);
        assert_eq!(m.scalar_ratio(&p), Some(f.inv(Felt(7)).unwrap()));
    }

    #[test]
    fn extension_coefficients() {
        let f = Field::new(3, 2, None).unwrap();
        let p = MultiPoly::parse(&f, 1, "(z^3)*x0 + [1,1]").unwrap();
        assert_eq!(MultiPoly::parse(&f, 1, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn mismatched_operands() {
        let f = Field::prime(5).unwrap();
        let g = Field::prime(7).unwrap();
        let a = MultiPoly::var(&f, 2, 0).unwrap();
        assert!(a.add(&MultiPoly::var(&f, 3, 0).unwrap()).is_err());
        assert!(a.mul(&MultiPoly::var(&g, 2, 0).unwrap()).is_err());
        assert!(MultiPoly::var(&f, 2, 2).is_err());
    }
}
