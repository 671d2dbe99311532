//! Enveloping superalgebra in PBW normal form.
//!
//! Order: negative roots, then Cartan (and central) elements, then positive
//! roots, ids ascending inside each block.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exactnum::{int, rat, Coeff, Rational};
use crate::liealg::StructureTable;
use crate::rootsys::{RootSystem, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    Negative,
    Cartan,
    Positive,
}

impl Block {
    fn tag(self) -> char {
        match self {
            Block::Negative => 'f',
            Block::Cartan => 'h',
            Block::Positive => 'e',
        }
    }
}

/// Ordered factors `(id, exponent)`, strictly increasing in PBW rank.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PBWMono(pub Vec<(usize, u32)>);

impl PBWMono {
    pub fn one() -> Self {
        PBWMono(Vec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    /// Factors with repetition, left to right.
    pub fn word(&self) -> Vec<usize> {
        self.0
            .iter()
            .flat_map(|&(i, e)| std::iter::repeat(i).take(e as usize))
            .collect()
    }

    fn split_first(&self) -> Option<(usize, PBWMono)> {
        let (&(id, e), rest) = self.0.split_first()?;
        let mut tail = Vec::with_capacity(self.0.len());
        if e > 1 {
            tail.push((id, e - 1));
        }
        tail.extend_from_slice(rest);
        Some((id, PBWMono(tail)))
    }
}

/// Terms over a coefficient ring, all monomials normal-ordered.
#[derive(Clone, Debug, PartialEq)]
pub struct UEAElem<R> {
    pub terms: BTreeMap<PBWMono, R>,
}

impl<R: Coeff> UEAElem<R> {
    pub fn zero() -> Self {
        UEAElem { terms: BTreeMap::new() }
    }

    pub fn monomial(m: PBWMono, c: R) -> Self {
        let mut u = UEAElem::zero();
        u.add_term(m, c);
        u
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: PBWMono, c: R) {
        if c.vanishes() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old.add_ref(&c);
                if !s.vanishes() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg_ref());
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> Self {
        let mut out = UEAElem::zero();
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.scale(r));
        }
        out
    }

    /// Filtration degree (longest monomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(PBWMono::degree).max().unwrap_or(0)
    }
}

/// Rational combination of PBW monomials.
pub type RElem = BTreeMap<PBWMono, Rational>;

fn add_into(acc: &mut RElem, m: &PBWMono, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(m.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(m);
    }
}

/// Multiplication context over one structure table.
///
/// Products of PBW monomials are computed over ℚ and memoized; coefficients
/// of other rings only enter through bilinear extension.
pub struct Uea<'a> {
    pub table: &'a StructureTable,
    rank: Vec<usize>,
    block: Vec<Block>,
    memo: RefCell<HashMap<(usize, PBWMono), Rc<RElem>>>,
}

impl<'a> Uea<'a> {
    pub fn new(table: &'a StructureTable, rs: &RootSystem) -> Self {
        let n = table.dim();
        let block: Vec<Block> = (0..n)
            .map(|i| match rs.sign(i) {
                Some(Sign::Negative) => Block::Negative,
                Some(Sign::Positive) => Block::Positive,
                None => Block::Cartan,
            })
            .collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (block[i], i));
        let mut rank = vec![0; n];
        for (r, &i) in order.iter().enumerate() {
            rank[i] = r;
        }
        Uea {
            table,
            rank,
            block,
            memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn block(&self, id: usize) -> Block {
        self.block[id]
    }

    pub fn rank(&self, id: usize) -> usize {
        self.rank[id]
    }

    pub fn parity_of(&self, m: &PBWMono) -> u8 {
        (m.0.iter().map(|&(i, e)| self.table.parity(i) as u32 * e).sum::<u32>() % 2) as u8
    }

    /// `x · m` in normal form.
    pub fn left_mul(&self, x: usize, m: &PBWMono) -> Result<Rc<RElem>> {
        if let Some(r) = self.memo.borrow().get(&(x, m.clone())) {
            return Ok(r.clone());
        }
        let res = Rc::new(self.left_mul_raw(x, m)?);
        self.memo.borrow_mut().insert((x, m.clone()), res.clone());
        Ok(res)
    }

    fn left_mul_raw(&self, x: usize, m: &PBWMono) -> Result<RElem> {
        let mut out = RElem::new();
        let Some(&(y, e)) = m.0.first() else {
            add_into(&mut out, &PBWMono(vec![(x, 1)]), int(1));
            return Ok(out);
        };
        if self.rank[x] < self.rank[y] {
            let mut f = Vec::with_capacity(m.0.len() + 1);
            f.push((x, 1));
            f.extend_from_slice(&m.0);
            add_into(&mut out, &PBWMono(f), int(1));
            return Ok(out);
        }
        let (_, rest) = m.split_first().unwrap();
        if x == y {
            if self.table.parity(x) == 0 {
                let mut f = m.0.clone();
                f[0] = (x, e + 1);
                add_into(&mut out, &PBWMono(f), int(1));
            } else {
                // x·x = ½[x, x]
                for (l, c) in self.table.bracket(x, x)? {
                    for (mm, cc) in self.left_mul(*l, &rest)?.iter() {
                        add_into(&mut out, mm, c * cc * rat(1, 2));
                    }
                }
            }
            return Ok(out);
        }
        // x·y·rest = ±y·(x·rest) + [x, y]·rest
        let s = if self.table.parity(x) * self.table.parity(y) == 1 { int(-1) } else { int(1) };
        let xr = self.left_mul(x, &rest)?;
        for (mm, c) in xr.iter() {
            for (m2, c2) in self.left_mul(y, mm)?.iter() {
                add_into(&mut out, m2, &s * c * c2);
            }
        }
        for (l, c) in self.table.bracket(x, y)? {
            for (mm, cc) in self.left_mul(*l, &rest)?.iter() {
                add_into(&mut out, mm, c * cc);
            }
        }
        Ok(out)
    }

    /// `a · b` in normal form.
    pub fn mono_mul(&self, a: &PBWMono, b: &PBWMono) -> Result<RElem> {
        let mut acc = RElem::new();
        acc.insert(b.clone(), int(1));
        for &g in a.word().iter().rev() {
            let mut next = RElem::new();
            for (m, c) in &acc {
                for (m2, c2) in self.left_mul(g, m)?.iter() {
                    add_into(&mut next, m2, c * c2);
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    /// Normal form of a word of basis ids.
    pub fn normal_form<R: Coeff>(&self, ctx: &R::Ctx, word: &[usize]) -> Result<UEAElem<R>> {
        for &i in word {
            if i >= self.table.dim() {
                return Err(Error::Internal(format!("basis id {i} out of range")));
            }
        }
        let mut acc = RElem::new();
        acc.insert(PBWMono::one(), int(1));
        for &g in word.iter().rev() {
            let mut next = RElem::new();
            for (m, c) in &acc {
                for (m2, c2) in self.left_mul(g, m)?.iter() {
                    add_into(&mut next, m2, c * c2);
                }
            }
            acc = next;
        }
        Ok(lift(ctx, acc))
    }

    pub fn generator<R: Coeff>(&self, ctx: &R::Ctx, id: usize) -> UEAElem<R> {
        UEAElem::monomial(PBWMono(vec![(id, 1)]), R::constant(ctx, int(1)))
    }

    pub fn scalar<R: Coeff>(&self, ctx: &R::Ctx, r: Rational) -> UEAElem<R> {
        UEAElem::monomial(PBWMono::one(), R::constant(ctx, r))
    }

    pub fn mul<R: Coeff>(&self, u: &UEAElem<R>, v: &UEAElem<R>) -> Result<UEAElem<R>> {
        let mut out = UEAElem::zero();
        for (a, ca) in &u.terms {
            for (b, cb) in &v.terms {
                let cab = ca.mul_ref(cb);
                for (m, c) in self.mono_mul(a, b)? {
                    out.add_term(m, cab.scale(&c));
                }
            }
        }
        Ok(out)
    }

    /// Split by parity of the monomials.
    pub fn parity_parts<R: Coeff>(&self, u: &UEAElem<R>) -> [UEAElem<R>; 2] {
        let mut parts = [UEAElem::zero(), UEAElem::zero()];
        for (m, c) in &u.terms {
            parts[self.parity_of(m) as usize].add_term(m.clone(), c.clone());
        }
        parts
    }

    /// uv − (−1)^{p(u)p(v)} vu on homogeneous parts.
    pub fn bracket<R: Coeff>(&self, u: &UEAElem<R>, v: &UEAElem<R>) -> Result<UEAElem<R>> {
        let mut out = UEAElem::zero();
        let (pu, pv) = (self.parity_parts(u), self.parity_parts(v));
        for (i, a) in pu.iter().enumerate() {
            for (j, b) in pv.iter().enumerate() {
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                let ab = self.mul(a, b)?;
                let ba = self.mul(b, a)?;
                out = if i * j == 1 { out.add(&ab).add(&ba) } else { out.add(&ab).sub(&ba) };
            }
        }
        Ok(out)
    }

    /// `[x, y]` embedded in degree one.
    pub fn structure_bracket<R: Coeff>(&self, ctx: &R::Ctx, x: usize, y: usize) -> Result<UEAElem<R>> {
        let mut out = UEAElem::zero();
        for (l, c) in self.table.bracket(x, y)? {
            out.add_term(PBWMono(vec![(*l, 1)]), R::constant(ctx, c.clone()));
        }
        Ok(out)
    }

    pub fn format_mono(&self, m: &PBWMono) -> String {
        if m.is_one() {
            return "1".into();
        }
        let parts: Vec<String> = m
            .0
            .iter()
            .map(|&(i, e)| {
                let base = format!("{}[{i}]", self.block[i].tag());
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect();
        parts.join(" * ")
    }

    /// Canonical text, e.g. `f[3]^2 * h[0] * e[7] - 1/2 * h[0]`.
    pub fn format<R: Coeff>(&self, u: &UEAElem<R>) -> String {
        if u.is_zero() {
            return "0".into();
        }
        let mut keys: Vec<&PBWMono> = u.terms.keys().collect();
        keys.sort_by_key(|m| {
            (
                std::cmp::Reverse(m.degree()),
                m.0.iter().map(|&(i, e)| (self.rank[i], e)).collect::<Vec<_>>(),
            )
        });
        let mut s = String::new();
        for (n, m) in keys.into_iter().enumerate() {
            let c = u.terms[m].to_string();
            let (neg, body) = match c.strip_prefix('-') {
                Some(b) if !b.contains(' ') => (true, b.to_string()),
                _ => (false, c.clone()),
            };
            let body = if body.contains(' ') { format!("({body})") } else { body };
            if n == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            match (body.as_str(), m.is_one()) {
                (_, true) => s.push_str(&body),
                ("1", false) => s.push_str(&self.format_mono(m)),
                _ => {
                    s.push_str(&body);
                    s.push_str(" * ");
                    s.push_str(&self.format_mono(m));
                }
            }
        }
        s
    }

    /// Parse the canonical text back (rational coefficients).
    pub fn parse(&self, s: &str) -> Result<UEAElem<Rational>> {
        let bad = |m: &str| Error::Parse(format!("bad enveloping-algebra term {m:?}"));
        let mut out = UEAElem::zero();
        let s = s.trim();
        if s == "0" {
            return Ok(out);
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut rest = s.to_string();
        let mut neg = false;
        if let Some(r) = rest.strip_prefix('-') {
            neg = true;
            rest = r.to_string();
        }
        loop {
            let cut = [" + ", " - "].iter().filter_map(|p| rest.find(p).map(|i| (i, *p))).min();
            match cut {
                Some((i, p)) => {
                    terms.push((neg, rest[..i].to_string()));
                    neg = p == " - ";
                    rest = rest[i + 3..].to_string();
                }
                None => {
                    terms.push((neg, rest));
                    break;
                }
            }
        }
        for (neg, t) in terms {
            let mut coeff = int(if neg { -1 } else { 1 });
            let mut word = Vec::new();
            for f in t.split(" * ") {
                let f = f.trim();
                if let Some(open) = f.find('[') {
                    let close = f.find(']').ok_or_else(|| bad(f))?;
                    let id: usize = f[open + 1..close].parse().map_err(|_| bad(f))?;
                    let exp: usize = match f[close + 1..].strip_prefix('^') {
                        Some(e) => e.parse().map_err(|_| bad(f))?,
                        None if close + 1 == f.len() => 1,
                        None => return Err(bad(f)),
                    };
                    if id >= self.table.dim() || self.block[id].tag().to_string() != f[..open] {
                        return Err(bad(f));
                    }
                    word.extend(std::iter::repeat(id).take(exp));
                } else {
                    coeff *= crate::exactnum::parse_rational(f)?;
                }
            }
            let nf = self.normal_form::<Rational>(&crate::exactnum::NoCtx, &word)?;
            out = out.add(&nf.scale(&coeff));
        }
        Ok(out)
    }
}

fn lift<R: Coeff>(ctx: &R::Ctx, e: RElem) -> UEAElem<R> {
    let mut out = UEAElem::zero();
    for (m, c) in e {
        out.add_term(m, R::constant(ctx, c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::NoCtx;
    use crate::liealg::{build_algebra, AlgebraId};
    use crate::superpoly::SPoly;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = UEAElem<Rational>;

    fn setup(k: usize) -> (StructureTable, RootSystem) {
        let t = build_algebra(AlgebraId::po(k)).unwrap();
        let rs = RootSystem::new(&t).unwrap();
        (t, rs)
    }

    fn id(t: &StructureTable, s: &str) -> usize {
        let (m, _) = SPoly::parse(t.k(), s).unwrap().as_monomial().unwrap();
        t.id_of(m).unwrap()
    }

    /// Literal rewriting of words: always fix the leftmost (or rightmost) inversion.
    fn straighten(u: &Uea, word: Vec<usize>, leftmost: bool) -> BTreeMap<Vec<usize>, Rational> {
        let mut todo: Vec<(Vec<usize>, Rational)> = vec![(word, int(1))];
        let mut done: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        while let Some((w, c)) = todo.pop() {
            if c.is_zero() {
                continue;
            }
            let bad: Vec<usize> = (0..w.len().saturating_sub(1))
                .filter(|&i| {
                    let (a, b) = (w[i], w[i + 1]);
                    u.rank(a) > u.rank(b) || (a == b && u.table.parity(a) == 1)
                })
                .collect();
            let pos = if leftmost { bad.first() } else { bad.last() };
            let Some(&i) = pos else {
                *done.entry(w).or_insert_with(Rational::zero) += c;
                continue;
            };
            let (a, b) = (w[i], w[i + 1]);
            if a == b {
                for (l, s) in u.table.bracket(a, a).unwrap() {
                    let mut nw = w[..i].to_vec();
                    nw.push(*l);
                    nw.extend_from_slice(&w[i + 2..]);
                    todo.push((nw, &c * s * rat(1, 2)));
                }
                continue;
            }
            let sgn = if u.table.parity(a) * u.table.parity(b) == 1 { -1 } else { 1 };
            let mut sw = w.clone();
            sw.swap(i, i + 1);
            todo.push((sw, &c * int(sgn)));
            for (l, s) in u.table.bracket(a, b).unwrap() {
                let mut nw = w[..i].to_vec();
                nw.push(*l);
                nw.extend_from_slice(&w[i + 2..]);
                todo.push((nw, &c * s));
            }
        }
        done.retain(|_, c| !c.is_zero());
        done
    }

    fn as_words(u: &Q) -> BTreeMap<Vec<usize>, Rational> {
        u.terms.iter().map(|(m, c)| (m.word(), c.clone())).collect()
    }

    #[test]
    fn spec_examples() {
        let (t, rs) = setup(1);
        let u = Uea::new(&t, &rs);
        let (x, y, one) = (id(&t, "x1"), id(&t, "y1"), id(&t, "1"));
        assert!(u.normal_form::<Rational>(&NoCtx, &[x, x]).unwrap().is_zero());
        assert!(u.rank(y) < u.rank(x));
        let got = u.normal_form::<Rational>(&NoCtx, &[x, y]).unwrap();
        let mut want = Q::monomial(PBWMono(vec![(y, 1), (x, 1)]), int(-1));
        want.add_term(PBWMono(vec![(one, 1)]), int(1));
        assert_eq!(got, want);
        let ordered = u.normal_form::<Rational>(&NoCtx, &[y, one, x]).unwrap();
        assert_eq!(ordered, Q::monomial(PBWMono(vec![(y, 1), (one, 1), (x, 1)]), int(1)));
        assert_eq!(u.format(&got), format!("-f[{y}] * e[{x}] + h[{one}]"));
        assert_eq!(u.parse(&u.format(&got)).unwrap(), got);
    }

    #[test]
    fn confluence_against_rewriting() {
        let (t, rs) = setup(2);
        let u = Uea::new(&t, &rs);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let len = rng.gen_range(0..=5);
            let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..t.dim())).collect();
            let nf = u.normal_form::<Rational>(&NoCtx, &w).unwrap();
            let got = as_words(&nf);
            assert_eq!(got, straighten(&u, w.clone(), true), "word {w:?}");
            assert_eq!(got, straighten(&u, w.clone(), false), "word {w:?}");
            // filtration and parity
            let p = w.iter().map(|&i| t.parity(i) as u32).sum::<u32>() % 2;
            for m in nf.terms.keys() {
                assert!(m.degree() as usize <= w.len());
                assert_eq!(u.parity_of(m) as u32, p);
                for pair in m.0.windows(2) {
                    assert!(u.rank(pair[0].0) < u.rank(pair[1].0));
                }
                for &(i, e) in &m.0 {
                    assert!(e >= 1 && (t.parity(i) == 0 || e == 1));
                }
            }
        }
    }

    #[test]
    fn bracket_and_unit() {
        let (t, rs) = setup(2);
        let u = Uea::new(&t, &rs);
        let one = u.scalar::<Rational>(&NoCtx, int(1));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (x, y, z) = (
                rng.gen_range(0..t.dim()),
                rng.gen_range(0..t.dim()),
                rng.gen_range(0..t.dim()),
            );
            let (gx, gy, gz) = (
                u.generator::<Rational>(&NoCtx, x),
                u.generator(&NoCtx, y),
                u.generator(&NoCtx, z),
            );
            assert_eq!(u.mul(&one, &gx).unwrap(), gx);
            assert_eq!(u.bracket(&gx, &gy).unwrap(), u.structure_bracket(&NoCtx, x, y).unwrap());
            // [[x,y],z] = [x,[y,z]] − (−1)^{p(x)p(y)} [y,[x,z]]
            let lhs = u.bracket(&u.bracket(&gx, &gy).unwrap(), &gz).unwrap();
            let a = u.bracket(&gx, &u.bracket(&gy, &gz).unwrap()).unwrap();
            let b = u.bracket(&gy, &u.bracket(&gx, &gz).unwrap()).unwrap();
            let s = if t.parity(x) * t.parity(y) == 1 { int(-1) } else { int(1) };
            assert_eq!(lhs, a.sub(&b.scale(&s)));
        }
    }

    #[test]
    fn associativity() {
        let (t, rs) = setup(2);
        let u = Uea::new(&t, &rs);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let mut w = || {
                let n = rng.gen_range(1..=3);
                let word: Vec<usize> = (0..n).map(|_| rng.gen_range(0..t.dim())).collect();
                u.normal_form::<Rational>(&NoCtx, &word).unwrap()
            };
            let (a, b, c) = (w(), w(), w());
            let l = u.mul(&u.mul(&a, &b).unwrap(), &c).unwrap();
            let r = u.mul(&a, &u.mul(&b, &c).unwrap()).unwrap();
            assert_eq!(l, r);
        }
    }
}
