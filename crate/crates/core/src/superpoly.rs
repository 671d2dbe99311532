//! Grassmann–Laurent polynomials: ℚ[t, t⁻¹] ⊗ Λ(ξ₁..ξ_k, η₁..η_k).
//!
//! Odd generators are stored as bits of a mask in the canonical order
//! ξ₁ < … < ξ_k < η₁ < … < η_k (bit `i-1` is ξ_i, bit `k+i-1` is η_i).
//! Every product and derivative carries its reordering sign explicitly.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::exactnum::{fmt_rational, int, parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OddMask(pub u32);

impl OddMask {
    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn parity(self) -> u8 {
        (self.0.count_ones() & 1) as u8
    }

    pub fn contains(self, bit: usize) -> bool {
        self.0 >> bit & 1 == 1
    }

    pub fn top(k: usize) -> OddMask {
        OddMask(((1u64 << (2 * k)) - 1) as u32)
    }

    /// Complement inside the 2k generators.
    pub fn complement(self, k: usize) -> OddMask {
        OddMask(!self.0 & Self::top(k).0)
    }

    /// ξ-exponents α and η-exponents β as bit vectors over 1..k.
    pub fn split(self, k: usize) -> (u32, u32) {
        let lo = (1u32 << k) - 1;
        (self.0 & lo, (self.0 >> k) & lo)
    }
}

/// Sign of `θ^a · θ^b` brought to canonical order (zero if they overlap).
pub fn merge_sign(a: OddMask, b: OddMask) -> i32 {
    if a.0 & b.0 != 0 {
        return 0;
    }
    let mut swaps = 0u32;
    let mut rest = b.0;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        swaps += (a.0 >> (j + 1)).count_ones();
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SuperMono {
    pub tdeg: i32,
    pub mask: OddMask,
}

impl SuperMono {
    pub fn new(tdeg: i32, mask: u32) -> Self {
        SuperMono {
            tdeg,
            mask: OddMask(mask),
        }
    }

    pub fn parity(&self) -> u8 {
        self.mask.parity()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SPoly {
    k: usize,
    terms: BTreeMap<SuperMono, Rational>,
}

impl SPoly {
    pub fn zero(k: usize) -> Self {
        SPoly {
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(k: usize, mono: SuperMono, c: Rational) -> Self {
        let mut p = SPoly::zero(k);
        p.add_term(mono, c);
        p
    }

    pub fn one(k: usize) -> Self {
        SPoly::monomial(k, SuperMono::new(0, 0), Rational::one())
    }

    pub fn t_pow(k: usize, n: i32) -> Self {
        SPoly::monomial(k, SuperMono::new(n, 0), Rational::one())
    }

    /// Odd generator by canonical index: `0..k` are ξ, `k..2k` are η.
    pub fn gen(k: usize, index: usize) -> Result<Self> {
        if index >= 2 * k {
            return Err(Error::GeneratorOutOfRange { index, k });
        }
        Ok(SPoly::monomial(k, SuperMono::new(0, 1 << index), Rational::one()))
    }

    /// ξ_i for `i` in `1..=k`.
    pub fn xi(k: usize, i: usize) -> Self {
        SPoly::gen(k, i - 1).expect("xi index")
    }

    /// η_i for `i` in `1..=k`.
    pub fn eta(k: usize, i: usize) -> Self {
        SPoly::gen(k, k + i - 1).expect("eta index")
    }

    /// Ordered product of generator indices, e.g. `[0, 3]` is ξ₁η₂ for k = 2.
    pub fn ordered_product(k: usize, tdeg: i32, gens: &[usize]) -> Result<Self> {
        let mut p = SPoly::t_pow(k, tdeg);
        for &g in gens {
            p = p.smul(&SPoly::gen(k, g)?)?;
        }
        Ok(p)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SuperMono, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: SuperMono) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
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

    /// The single term if this is a monomial.
    pub fn as_monomial(&self) -> Option<(SuperMono, Rational)> {
        (self.terms.len() == 1).then(|| {
            let (m, c) = self.terms.iter().next().unwrap();
            (*m, c.clone())
        })
    }

    /// Parity if homogeneous; zero counts as even.
    pub fn parity(&self) -> Option<u8> {
        let mut ps = self.terms.keys().map(SuperMono::parity);
        match ps.next() {
            None => Some(0),
            Some(p) => ps.all(|q| q == p).then_some(p),
        }
    }

    pub fn parity_parts(&self) -> [SPoly; 2] {
        let mut parts = [SPoly::zero(self.k), SPoly::zero(self.k)];
        for (m, c) in &self.terms {
            parts[m.parity() as usize].terms.insert(*m, c.clone());
        }
        parts
    }

    pub fn add_term(&mut self, m: SuperMono, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(m.mask.0 & !OddMask::top(self.k).0 == 0);
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

    fn check(&self, other: &SPoly) -> Result<()> {
        if self.k == other.k {
            Ok(())
        } else {
            Err(Error::PairMismatch(self.k, other.k))
        }
    }

    pub fn add(&self, other: &SPoly) -> SPoly {
        assert_eq!(self.k, other.k, "k mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SPoly) -> SPoly {
        self.add(&other.scale(&int(-1)))
    }

    pub fn scale(&self, r: &Rational) -> SPoly {
        let mut out = SPoly::zero(self.k);
        if !r.is_zero() {
            for (m, c) in &self.terms {
                out.terms.insert(*m, c * r);
            }
        }
        out
    }

    /// Grassmann–Laurent product.
    pub fn smul(&self, other: &SPoly) -> Result<SPoly> {
        self.check(other)?;
        let mut out = SPoly::zero(self.k);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let s = merge_sign(m1.mask, m2.mask);
                if s == 0 {
                    continue;
                }
                let c = c1 * c2;
                out.add_term(
                    SuperMono {
                        tdeg: m1.tdeg + m2.tdeg,
                        mask: OddMask(m1.mask.0 | m2.mask.0),
                    },
                    if s > 0 { c } else { -c },
                );
            }
        }
        Ok(out)
    }

    /// Left derivative ∂/∂θ_i (canonical index).
    pub fn left_partial(&self, index: usize) -> Result<SPoly> {
        if index >= 2 * self.k {
            return Err(Error::GeneratorOutOfRange { index, k: self.k });
        }
        let mut out = SPoly::zero(self.k);
        for (m, c) in &self.terms {
            if !m.mask.contains(index) {
                continue;
            }
            let before = (m.mask.0 & ((1u32 << index) - 1)).count_ones();
            let c = if before % 2 == 0 { c.clone() } else { -c.clone() };
            out.add_term(
                SuperMono {
                    tdeg: m.tdeg,
                    mask: OddMask(m.mask.0 & !(1 << index)),
                },
                c,
            );
        }
        Ok(out)
    }

    pub fn d_xi(&self, i: usize) -> SPoly {
        self.left_partial(i - 1).expect("xi index")
    }

    pub fn d_eta(&self, i: usize) -> SPoly {
        self.left_partial(self.k + i - 1).expect("eta index")
    }

    pub fn t_partial(&self) -> SPoly {
        let mut out = SPoly::zero(self.k);
        for (m, c) in &self.terms {
            out.add_term(
                SuperMono {
                    tdeg: m.tdeg - 1,
                    mask: m.mask,
                },
                c * int(m.tdeg as i64),
            );
        }
        out
    }

    /// Euler operator E = Σ θ_i ∂/∂θ_i.
    pub fn euler_e(&self) -> SPoly {
        let mut out = SPoly::zero(self.k);
        for (m, c) in &self.terms {
            out.add_term(*m, c * int(m.mask.degree() as i64));
        }
        out
    }

    /// (2 − E)(f).
    pub fn two_minus_e(&self) -> SPoly {
        self.scale(&int(2)).sub(&self.euler_e())
    }

    /// Raw coefficient of the top monomial ξ₁…ξ_kη₁…η_k; t-free input only.
    pub fn top_coefficient(&self) -> Result<Rational> {
        if let Some(m) = self.terms.keys().find(|m| m.tdeg != 0) {
            return Err(Error::NonzeroTDegree(m.tdeg));
        }
        Ok(self.coeff(SuperMono {
            tdeg: 0,
            mask: OddMask::top(self.k),
        }))
    }

    /// Berezin integral ∫ f vol(θ) under the frozen orientation.
    pub fn berezin(&self) -> Result<Rational> {
        Ok(self.top_coefficient()? * int(CONV_SIGN))
    }

    /// Coefficient of t⁻¹ξ₁…ξ_kη₁…η_k under the frozen orientation.
    pub fn residue(&self) -> Rational {
        self.raw_residue() * int(CONV_SIGN)
    }

    pub fn raw_residue(&self) -> Rational {
        self.coeff(SuperMono {
            tdeg: -1,
            mask: OddMask::top(self.k),
        })
    }

    /// Parse the canonical text form, e.g. `"3*x1*y1 - t^-2*x2"`.
    ///
    /// Factors may come in any order; reordering signs are applied.
    pub fn parse(k: usize, s: &str) -> Result<SPoly> {
        let mut out = SPoly::zero(k);
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        for (sign, term) in split_terms(s)? {
            let mut p = SPoly::one(k).scale(&int(sign));
            for factor in term.split('*').map(str::trim) {
                p = p.smul(&parse_factor(k, factor)?)?;
            }
            out = out.add(&p);
        }
        Ok(out)
    }

    fn fmt_mono(&self, m: &SuperMono) -> String {
        let mut parts = Vec::new();
        match m.tdeg {
            0 => {}
            1 => parts.push("t".to_string()),
            n => parts.push(format!("t^{n}")),
        }
        for b in 0..2 * self.k {
            if m.mask.contains(b) {
                if b < self.k {
                    parts.push(format!("x{}", b + 1));
                } else {
                    parts.push(format!("y{}", b - self.k + 1));
                }
            }
        }
        parts.join("*")
    }
}

/// Orientation of the Berezin integral and the residue.
///
/// The only sign under which the 2ρ sum rule and the Casimir centrality
/// checks hold together; frozen by regression tests.
pub const CONV_SIGN: i64 = -1;

fn split_terms(s: &str) -> Result<Vec<(i64, String)>> {
    let mut out = Vec::new();
    let mut sign = 1;
    let mut cur = String::new();
    let mut prev: Option<char> = None;
    for ch in s.chars() {
        if (ch == '+' || ch == '-') && prev != Some('^') {
            if !cur.trim().is_empty() {
                out.push((sign, cur.trim().to_string()));
                cur.clear();
            } else if !out.is_empty() || ch == '+' || prev.is_some() {
                return Err(Error::Parse(format!("dangling operator in {s:?}")));
            }
            sign = if ch == '-' { -1 } else { 1 };
        } else {
            cur.push(ch);
        }
        if !ch.is_whitespace() {
            prev = Some(ch);
        }
    }
    if cur.trim().is_empty() {
        return Err(Error::Parse(format!("trailing operator in {s:?}")));
    }
    out.push((sign, cur.trim().to_string()));
    Ok(out)
}

fn parse_factor(k: usize, f: &str) -> Result<SPoly> {
    let bad = || Error::Parse(format!("bad factor {f:?}"));
    if let Some(rest) = f.strip_prefix('t') {
        let n: i32 = if rest.is_empty() {
            1
        } else {
            rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
        };
        return Ok(SPoly::t_pow(k, n));
    }
    let gen_idx = |rest: &str| -> Result<usize> {
        let i: usize = rest.parse().map_err(|_| bad())?;
        if i == 0 || i > k {
            return Err(Error::GeneratorOutOfRange { index: i, k });
        }
        Ok(i)
    };
    if let Some(rest) = f.strip_prefix('x') {
        return Ok(SPoly::xi(k, gen_idx(rest)?));
    }
    if let Some(rest) = f.strip_prefix('y') {
        return Ok(SPoly::eta(k, gen_idx(rest)?));
    }
    Ok(SPoly::one(k).scale(&parse_rational(f)?))
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
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

#[cfg(test)]
mod tests {
    use super::*;

    /// Sign of sorting a sequence of distinct generator indices by bubble sort.
    fn sort_sign(mut v: Vec<usize>) -> i64 {
        let mut s = 1;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    s = -s;
                }
            }
        }
        s
    }

    fn all_monos(k: usize) -> Vec<SPoly> {
        (0..1u32 << (2 * k))
            .map(|m| SPoly::monomial(k, SuperMono::new(0, m), int(1)))
            .collect()
    }

    #[test]
    fn products() {
        let (x1, y1) = (SPoly::xi(1, 1), SPoly::eta(1, 1));
        assert!(x1.smul(&x1).unwrap().is_zero());
        assert_eq!(x1.smul(&y1).unwrap().to_string(), "x1*y1");
        assert_eq!(y1.smul(&x1).unwrap().to_string(), "-x1*y1");

        let k = 2;
        let a = SPoly::xi(k, 1).smul(&SPoly::eta(k, 1)).unwrap();
        let b = SPoly::xi(k, 2).smul(&SPoly::eta(k, 2)).unwrap();
        let p = a.smul(&b).unwrap();
        // ξ₁η₁ξ₂η₂ as indices [0, 2, 1, 3]
        let expected = sort_sign(vec![0, 2, 1, 3]);
        assert_eq!(p, SPoly::monomial(k, SuperMono::new(0, 0b1111), int(expected)));
        assert_eq!(expected, -1);
        assert!(SPoly::xi(1, 1).smul(&SPoly::xi(2, 1)).is_err());
    }

    #[test]
    fn derivatives() {
        let f = SPoly::parse(1, "x1*y1").unwrap();
        assert_eq!(f.d_eta(1), SPoly::xi(1, 1).scale(&int(-1)));
        assert_eq!(f.d_xi(1), SPoly::eta(1, 1));
        assert!(SPoly::parse(2, "x1*y1").unwrap().d_xi(2).is_zero());
        // θ_i · ∂_i f recovers f when f contains θ_i once
        let g = SPoly::eta(1, 1).smul(&f.d_eta(1)).unwrap();
        assert_eq!(g, f);
        assert!(f.left_partial(2).is_err());
    }

    #[test]
    fn euler_and_t() {
        let f = SPoly::parse(2, "x1*x2*y2").unwrap();
        assert_eq!(f.euler_e(), f.scale(&int(3)));
        assert_eq!(
            SPoly::parse(1, "t^2*x1").unwrap().t_partial(),
            SPoly::parse(1, "2*t*x1").unwrap()
        );
        assert_eq!(SPoly::parse(1, "1 + x1").unwrap().euler_e(), SPoly::xi(1, 1));
    }

    #[test]
    fn berezin_and_residue() {
        let s = int(CONV_SIGN);
        assert_eq!(SPoly::parse(1, "x1*y1").unwrap().berezin().unwrap(), s);
        assert_eq!(SPoly::one(2).berezin().unwrap(), int(0));
        assert_eq!(
            SPoly::parse(2, "3*x1*x2*y1*y2 + x1").unwrap().berezin().unwrap(),
            int(3) * &s
        );
        assert_eq!(
            SPoly::parse(1, "t*x1").unwrap().berezin(),
            Err(Error::NonzeroTDegree(1))
        );
        assert_eq!(SPoly::parse(3, "t^-1*x1*x2*x3*y1*y2*y3").unwrap().residue(), s);
        assert_eq!(SPoly::parse(3, "x1*x2*x3*y1*y2*y3").unwrap().residue(), int(0));
        assert_eq!(SPoly::parse(3, "t^-1*x1").unwrap().residue(), int(0));
    }

    #[test]
    fn text_round_trip() {
        let p = SPoly::parse(2, "t^-2*x1*x2*y2 - 1/2*y1 + 3").unwrap();
        assert_eq!(p.to_string(), "t^-2*x1*x2*y2 + 3 - 1/2*y1");
        assert_eq!(SPoly::parse(2, &p.to_string()).unwrap(), p);
        assert_eq!(SPoly::parse(2, "y1*x1").unwrap(), SPoly::parse(2, "-x1*y1").unwrap());
        assert!(SPoly::parse(2, "x3").is_err());
        assert!(SPoly::parse(2, "x1 +").is_err());
    }

    #[test]
    fn supercommutative_and_associative() {
        for k in 1..=3 {
            let ms = all_monos(k);
            for f in &ms {
                for g in &ms {
                    let pf = f.parity().unwrap() as u32;
                    let pg = g.parity().unwrap() as u32;
                    let s = if pf * pg % 2 == 1 { -1 } else { 1 };
                    assert_eq!(f.smul(g).unwrap(), g.smul(f).unwrap().scale(&int(s)));
                }
            }
        }
        let ms = all_monos(2);
        for f in &ms {
            for g in &ms {
                for h in &ms {
                    let l = f.smul(g).unwrap().smul(h).unwrap();
                    let r = f.smul(&g.smul(h).unwrap()).unwrap();
                    assert_eq!(l, r);
                }
            }
        }
    }

    #[test]
    fn left_partial_is_odd_derivation() {
        for k in 1..=2 {
            let ms = all_monos(k);
            for i in 0..2 * k {
                for f in &ms {
                    let s = if f.parity().unwrap() == 1 { -1 } else { 1 };
                    for g in &ms {
                        let lhs = f.smul(g).unwrap().left_partial(i).unwrap();
                        let rhs = f
                            .left_partial(i)
                            .unwrap()
                            .smul(g)
                            .unwrap()
                            .add(&f.smul(&g.left_partial(i).unwrap()).unwrap().scale(&int(s)));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn berezin_kills_derivatives() {
        for k in 1..=2 {
            for f in all_monos(k) {
                for i in 0..2 * k {
                    assert!(f.left_partial(i).unwrap().berezin().unwrap().is_zero());
                }
            }
        }
    }
}
