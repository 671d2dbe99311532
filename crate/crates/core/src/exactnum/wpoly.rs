use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{fmt_rational, Rational};
use crate::error::{Error, Result};

/// A highest-weight coordinate.
///
/// `Po`/`Sh` carry a subset `J ⊆ {1..k}` as a bitmask (bit `i-1` for `i`);
/// `K16` carries an index in `1..=8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeightVar {
    Po(u32),
    Sh(u32),
    K16(u8),
}

impl WeightVar {
    pub fn name(&self) -> String {
        match self {
            WeightVar::Po(j) | WeightVar::Sh(j) => {
                let idx: Vec<String> = (0..32)
                    .filter(|b| j >> b & 1 == 1)
                    .map(|b| (b + 1).to_string())
                    .collect();
                format!("a{{{}}}", idx.join(","))
            }
            WeightVar::K16(i) => format!("a{i}"),
        }
    }
}

impl fmt::Display for WeightVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// The ordered variable list a polynomial lives over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSpace {
    vars: Vec<WeightVar>,
}

impl VarSpace {
    pub fn new(vars: Vec<WeightVar>) -> Arc<Self> {
        Arc::new(VarSpace { vars })
    }

    pub fn vars(&self) -> &[WeightVar] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn index_of(&self, v: WeightVar) -> Option<usize> {
        self.vars.iter().position(|&w| w == v)
    }
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono(vec![0; n])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Mono) -> Option<Mono> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Mono)
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with rational coefficients in the weight coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WPoly {
    space: Arc<VarSpace>,
    terms: BTreeMap<Mono, Rational>,
}

impl WPoly {
    pub fn zero(space: Arc<VarSpace>) -> Self {
        WPoly {
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: Arc<VarSpace>, c: Rational) -> Self {
        let mut p = WPoly::zero(space);
        if !c.is_zero() {
            let n = p.space.len();
            p.terms.insert(Mono::one(n), c);
        }
        p
    }

    pub fn one(space: Arc<VarSpace>) -> Self {
        WPoly::constant(space, Rational::one())
    }

    pub fn var(space: Arc<VarSpace>, v: WeightVar) -> Result<Self> {
        let i = space.index_of(v).ok_or(Error::VarListMismatch)?;
        let mut e = vec![0; space.len()];
        e[i] = 1;
        let mut p = WPoly::zero(space);
        p.terms.insert(Mono(e), Rational::one());
        Ok(p)
    }

    pub fn from_terms(
        space: Arc<VarSpace>,
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Self {
        let mut p = WPoly::zero(space);
        for (e, c) in terms {
            assert_eq!(e.len(), p.space.len());
            p.add_term(Mono(e), c);
        }
        p
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
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

    /// The constant value if this polynomial has degree ≤ 0.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Mono::degree)
    }

    pub fn leading(&self) -> Option<(&Mono, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, m: Mono, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check(&self, other: &WPoly) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || self.space == other.space {
            Ok(())
        } else {
            Err(Error::VarListMismatch)
        }
    }

    pub fn try_add(&self, other: &WPoly) -> Result<WPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &WPoly) -> Result<WPoly> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &WPoly) -> Result<WPoly> {
        self.check(other)?;
        let mut out = WPoly::zero(self.space.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, r: &Rational) -> WPoly {
        if r.is_zero() {
            return WPoly::zero(self.space.clone());
        }
        WPoly {
            space: self.space.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * r))
                .collect(),
        }
    }

    pub fn neg(&self) -> WPoly {
        self.scale(&-Rational::one())
    }

    pub fn pow(&self, e: u32) -> WPoly {
        let mut out = WPoly::one(self.space.clone());
        for _ in 0..e {
            out = out.try_mul(self).unwrap();
        }
        out
    }

    /// Exact quotient `p / d`, or `None` when `d` does not divide `self`.
    ///
    /// Division by a single divisor under a monomial order leaves remainder
    /// zero exactly when the divisor divides.
    pub fn trial_divide(&self, d: &WPoly) -> Result<Option<WPoly>> {
        self.check(d)?;
        let (lm, lc) = match d.leading() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let mut r = self.clone();
        let mut q = WPoly::zero(self.space.clone());
        while let Some((rm, rc)) = r.leading() {
            let Some(tm) = rm.div(&lm) else {
                return Ok(None);
            };
            let tc = rc / &lc;
            for (m, c) in &d.terms {
                r.add_term(m.mul(&tm), -(c * &tc));
            }
            q.add_term(tm, tc);
        }
        Ok(Some(q))
    }

    /// Evaluate at a rational point given in variable-list order.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.space.len());
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (e, x) in m.0.iter().zip(point) {
                for _ in 0..*e {
                    t *= x;
                }
            }
            total += t;
        }
        total
    }

    /// Divide out the content so the leading coefficient is 1.
    pub fn monic(&self) -> WPoly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    fn fmt_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (i, e) in m.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.space.vars[i].name()),
                _ => parts.push(format!("{}^{}", self.space.vars[i].name(), e)),
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for WPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mono = self.fmt_mono(m);
            if mono.is_empty() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), mono)?;
            }
        }
        Ok(())
    }
}
