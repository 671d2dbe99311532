use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::brackets::{contact_bracket, poisson_bracket};
use crate::exactnum::{fmt_rational, int, parse_rational, Rational};
use crate::error::{Error, Result};
use crate::superpoly::{OddMask, SPoly, SuperMono};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Po,
    Sh,
    K16,
    LoopPo,
    LoopSh,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Po => "po",
            Family::Sh => "sh",
            Family::K16 => "k16",
            Family::LoopPo => "loop-po",
            Family::LoopSh => "loop-sh",
        }
    }

    pub fn parse(s: &str) -> Result<Family> {
        match s {
            "po" => Ok(Family::Po),
            "sh" => Ok(Family::Sh),
            "k16" => Ok(Family::K16),
            "loop-po" => Ok(Family::LoopPo),
            "loop-sh" => Ok(Family::LoopSh),
            _ => Err(Error::InvalidAlgebra(format!("unknown family {s:?}"))),
        }
    }

    pub fn is_loop(self) -> bool {
        matches!(self, Family::LoopPo | Family::LoopSh)
    }

    /// The finite-dimensional family underneath a loop family.
    pub fn base(self) -> Family {
        match self {
            Family::LoopPo => Family::Po,
            Family::LoopSh => Family::Sh,
            f => f,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraId {
    pub family: Family,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub band: Option<i32>,
}

impl AlgebraId {
    pub fn po(k: usize) -> Self {
        AlgebraId { family: Family::Po, k, band: None }
    }

    pub fn sh(k: usize) -> Self {
        AlgebraId { family: Family::Sh, k, band: None }
    }

    pub fn k16(band: i32) -> Self {
        AlgebraId { family: Family::K16, k: 3, band: Some(band) }
    }

    pub fn loop_po(k: usize, band: i32) -> Self {
        AlgebraId { family: Family::LoopPo, k, band: Some(band) }
    }

    pub fn loop_sh(k: usize, band: i32) -> Self {
        AlgebraId { family: Family::LoopSh, k, band: Some(band) }
    }

    pub fn new(family: Family, k: usize, band: Option<i32>) -> Result<Self> {
        let id = AlgebraId { family, k, band };
        id.validate()?;
        Ok(id)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > 8 {
            return Err(Error::InvalidAlgebra(format!("k = {} out of range 1..=8", self.k)));
        }
        match self.family {
            Family::K16 if self.k != 3 => {
                Err(Error::InvalidAlgebra("k16 requires k = 3".into()))
            }
            Family::K16 | Family::LoopPo | Family::LoopSh => match self.band {
                Some(t) if t >= 1 => Ok(()),
                _ => Err(Error::InvalidAlgebra(format!("{} needs a band T ≥ 1", self.family))),
            },
            Family::Po | Family::Sh => match self.band {
                None => Ok(()),
                Some(_) => Err(Error::InvalidAlgebra(format!("{} takes no band", self.family))),
            },
        }
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.family, self.band) {
            (Family::K16, Some(t)) => write!(f, "k16[T={t}]"),
            (fam, Some(t)) => write!(f, "{fam}(0|{})[T={t}]", 2 * self.k),
            (fam, None) => write!(f, "{fam}(0|{})", 2 * self.k),
        }
    }
}

/// Label of a Cartan basis element: `H_J` for po/sh, `H_1..H_8` for k16.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanLabel {
    Subset(u32),
    K16(u8),
}

impl fmt::Display for CartanLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanLabel::Subset(j) => {
                let idx: Vec<String> = (0..32)
                    .filter(|b| j >> b & 1 == 1)
                    .map(|b| (b + 1).to_string())
                    .collect();
                write!(f, "H{{{}}}", idx.join(","))
            }
            CartanLabel::K16(i) => write!(f, "H{i}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Cartan,
    Root,
    Central,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisElement {
    pub id: usize,
    /// Generating function: `sign · mono` (zero for the central element).
    pub gen: SPoly,
    pub mono: Option<SuperMono>,
    pub sign: i64,
    pub parity: u8,
    pub kind: Kind,
    pub cartan: Option<CartanLabel>,
    /// For loop families: (t-exponent, id in the base algebra).
    pub loop_base: Option<(i32, usize)>,
}

impl BasisElement {
    pub fn is_cartan(&self) -> bool {
        self.kind == Kind::Cartan
    }

    pub fn label(&self) -> String {
        match (self.kind, self.cartan) {
            (Kind::Central, _) => "z".into(),
            (_, Some(c)) => c.to_string(),
            _ => format!("K[{}]", self.gen),
        }
    }
}

pub type Expansion = Vec<(usize, Rational)>;

/// Finite basis with exact structure constants.
#[derive(Clone, Debug)]
pub struct StructureTable {
    pub algebra: AlgebraId,
    pub basis: Vec<BasisElement>,
    brackets: HashMap<(usize, usize), Expansion>,
    incomplete: BTreeSet<(usize, usize)>,
    index: HashMap<SuperMono, usize>,
}

/// The eight Cartan generators of k^L(1|6) in the displayed orderings:
/// H1..H3 = ξ_iη_i, H4 = t, H5 = t⁻¹ξ₂ξ₃η₃η₂, H6 = t⁻¹ξ₁ξ₃η₃η₁,
/// H7 = t⁻¹ξ₁ξ₂η₂η₁, H8 = t⁻²ξ₁ξ₂ξ₃η₃η₂η₁.
pub fn k16_cartan_gens() -> Vec<SPoly> {
    let spec: [(i32, &[usize]); 8] = [
        (0, &[0, 3]),
        (0, &[1, 4]),
        (0, &[2, 5]),
        (1, &[]),
        (-1, &[1, 2, 5, 4]),
        (-1, &[0, 2, 5, 3]),
        (-1, &[0, 1, 4, 3]),
        (-2, &[0, 1, 2, 5, 4, 3]),
    ];
    spec.iter()
        .map(|(t, g)| SPoly::ordered_product(3, *t, g).expect("k16 generator"))
        .collect()
}

/// `H_J = K_{ξ^J η^J}` written ξ-block first, which is canonical order.
pub fn po_cartan_mask(k: usize, j: u32) -> OddMask {
    OddMask(j | j << k)
}

fn element(id: usize, k: usize, mono: SuperMono, sign: i64) -> BasisElement {
    BasisElement {
        id,
        gen: SPoly::monomial(k, mono, int(sign)),
        mono: Some(mono),
        sign,
        parity: mono.parity(),
        kind: Kind::Root,
        cartan: None,
        loop_base: None,
    }
}

impl StructureTable {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn k(&self) -> usize {
        self.algebra.k
    }

    pub fn parity(&self, i: usize) -> u8 {
        self.basis[i].parity
    }

    pub fn id_of(&self, mono: SuperMono) -> Option<usize> {
        self.index.get(&mono).copied()
    }

    pub fn cartan_ids(&self) -> Vec<usize> {
        self.basis.iter().filter(|b| b.kind == Kind::Cartan).map(|b| b.id).collect()
    }

    pub fn cartan_id(&self, label: CartanLabel) -> Option<usize> {
        self.basis.iter().find(|b| b.cartan == Some(label)).map(|b| b.id)
    }

    pub fn central_id(&self) -> Option<usize> {
        self.basis.iter().find(|b| b.kind == Kind::Central).map(|b| b.id)
    }

    /// `[x_i, x_j]` as an expansion over the basis.
    pub fn bracket(&self, i: usize, j: usize) -> Result<&[(usize, Rational)]> {
        if self.incomplete.contains(&(i, j)) {
            return Err(Error::OutOfBand(i, j));
        }
        Ok(self.brackets.get(&(i, j)).map(Vec::as_slice).unwrap_or(&[]))
    }

    pub fn is_complete(&self, i: usize, j: usize) -> bool {
        !self.incomplete.contains(&(i, j))
    }

    pub fn incomplete_count(&self) -> usize {
        self.incomplete.len()
    }

    /// Bracket of two linear combinations.
    pub fn bracket_vec(&self, x: &[(usize, Rational)], y: &[(usize, Rational)]) -> Result<Expansion> {
        let mut acc: HashMap<usize, Rational> = HashMap::new();
        for (i, a) in x {
            for (j, b) in y {
                for (l, c) in self.bracket(*i, *j)? {
                    *acc.entry(*l).or_insert_with(Rational::zero) += a * b * c;
                }
            }
        }
        Ok(normalize(acc))
    }

    /// Express a generating function over the basis (po/sh/k16).
    pub fn express(&self, f: &SPoly) -> Result<Option<Expansion>> {
        let quotient = self.algebra.family.base() == Family::Sh;
        let mut out = Vec::new();
        for (m, c) in f.terms() {
            if quotient && m.mask.0 == 0 {
                continue;
            }
            match self.id_of(*m) {
                Some(id) => out.push((id, c * int(self.basis[id].sign))),
                None => {
                    if self.algebra.band.is_some() && self.algebra.family == Family::K16 {
                        return Ok(None);
                    }
                    return Err(Error::Internal(format!(
                        "{} has no basis element for {}",
                        self.algebra,
                        SPoly::monomial(f.k(), *m, int(1))
                    )));
                }
            }
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(Some(out))
    }

    /// Generating function of a linear combination (central part dropped).
    pub fn to_spoly(&self, x: &[(usize, Rational)]) -> SPoly {
        let mut out = SPoly::zero(self.k());
        for (i, c) in x {
            out = out.add(&self.basis[*i].gen.scale(c));
        }
        out
    }

    pub(super) fn from_parts(algebra: AlgebraId, basis: Vec<BasisElement>) -> Self {
        let index = basis
            .iter()
            .filter_map(|b| b.mono.map(|m| (m, b.id)))
            .collect();
        StructureTable {
            algebra,
            basis,
            brackets: HashMap::new(),
            incomplete: BTreeSet::new(),
            index,
        }
    }

    pub(super) fn fill<F>(&mut self, f: F)
    where
        F: Fn(&StructureTable, usize, usize) -> Result<Option<Expansion>> + Sync,
    {
        let n = self.dim();
        let this = &*self;
        let rows: Vec<Vec<(usize, usize, Option<Expansion>)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                (0..n)
                    .map(|j| (i, j, f(this, i, j).expect("bracket evaluation")))
                    .collect()
            })
            .collect();
        for (i, j, e) in rows.into_iter().flatten() {
            match e {
                None => {
                    self.incomplete.insert((i, j));
                }
                Some(e) if !e.is_empty() => {
                    self.brackets.insert((i, j), e);
                }
                Some(_) => {}
            }
        }
    }

    /// Nonzero bracket entries in canonical order.
    pub fn entries(&self) -> Vec<(usize, usize, &Expansion)> {
        let mut v: Vec<_> = self.brackets.iter().map(|(&(i, j), e)| (i, j, e)).collect();
        v.sort_by_key(|(i, j, _)| (*i, *j));
        v
    }

    pub fn check_super_antisymmetry(&self) -> Result<()> {
        for (&(i, j), e) in &self.brackets {
            if !self.is_complete(j, i) {
                continue;
            }
            let s = if self.parity(i) * self.parity(j) == 1 { int(1) } else { int(-1) };
            let back: Expansion = self.bracket(j, i)?.iter().map(|(l, c)| (*l, c * &s)).collect();
            if &back != e {
                return Err(Error::Internal(format!("antisymmetry fails at ({i}, {j})")));
            }
        }
        Ok(())
    }

    /// [x,[y,z]] − [[x,y],z] − (−1)^{p(x)p(y)}[y,[x,z]] for basis elements.
    pub fn jacobiator(&self, x: usize, y: usize, z: usize) -> Result<Expansion> {
        let one = |i: usize| vec![(i, Rational::one())];
        let a = self.bracket_vec(&one(x), self.bracket(y, z)?)?;
        let b = self.bracket_vec(self.bracket(x, y)?, &one(z))?;
        let c = self.bracket_vec(&one(y), self.bracket(x, z)?)?;
        let s = if self.parity(x) * self.parity(y) == 1 { int(-1) } else { int(1) };
        let mut acc: HashMap<usize, Rational> = HashMap::new();
        for (l, v) in a {
            *acc.entry(l).or_insert_with(Rational::zero) += v;
        }
        for (l, v) in b {
            *acc.entry(l).or_insert_with(Rational::zero) -= v;
        }
        for (l, v) in c {
            *acc.entry(l).or_insert_with(Rational::zero) -= v * &s;
        }
        Ok(normalize(acc))
    }
}

pub(crate) fn normalize(acc: HashMap<usize, Rational>) -> Expansion {
    let mut v: Expansion = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    v.sort_by_key(|(i, _)| *i);
    v
}

/// The bracket of generating functions used by a family.
pub fn family_bracket(family: Family, f: &SPoly, g: &SPoly) -> SPoly {
    match family.base() {
        Family::K16 => contact_bracket(f, g),
        _ => poisson_bracket(f, g),
    }
}

/// Construct the structure table of an algebra.
pub fn build_algebra(id: AlgebraId) -> Result<StructureTable> {
    id.validate()?;
    match id.family {
        Family::Po | Family::Sh => Ok(build_poisson(id)),
        Family::K16 => Ok(build_k16(id.band.unwrap())),
        Family::LoopPo | Family::LoopSh => {
            let base = build_poisson(AlgebraId {
                family: id.family.base(),
                k: id.k,
                band: None,
            });
            Ok(super::loops::build_loop(id, &base))
        }
    }
}

fn build_poisson(id: AlgebraId) -> StructureTable {
    let k = id.k;
    let top = OddMask::top(k).0;
    let sh = id.family == Family::Sh;
    let mut basis = Vec::new();
    for m in 0..=top {
        if sh && (m == 0 || m == top) {
            continue;
        }
        let mut e = element(basis.len(), k, SuperMono::new(0, m), 1);
        let (a, b) = OddMask(m).split(k);
        if a == b {
            e.kind = Kind::Cartan;
            e.cartan = Some(CartanLabel::Subset(a));
        }
        basis.push(e);
    }
    let mut table = StructureTable::from_parts(id, basis);
    table.fill(|t, i, j| {
        let f = family_bracket(t.algebra.family, &t.basis[i].gen, &t.basis[j].gen);
        t.express(&f)
    });
    table
}

fn build_k16(band: i32) -> StructureTable {
    let k = 3;
    let cartan: HashMap<SuperMono, (u8, i64)> = k16_cartan_gens()
        .into_iter()
        .enumerate()
        .map(|(n, g)| {
            let (m, c) = g.as_monomial().unwrap();
            let s = if c.is_one() { 1 } else { -1 };
            (m, (n as u8 + 1, s))
        })
        .collect();
    let mut basis = Vec::new();
    for a in -band..=band {
        for m in 0..=OddMask::top(k).0 {
            let mono = SuperMono::new(a, m);
            let mut e = match cartan.get(&mono) {
                Some(&(label, s)) => {
                    let mut e = element(basis.len(), k, mono, s);
                    e.kind = Kind::Cartan;
                    e.cartan = Some(CartanLabel::K16(label));
                    e
                }
                None => element(basis.len(), k, mono, 1),
            };
            e.id = basis.len();
            basis.push(e);
        }
    }
    let mut table = StructureTable::from_parts(AlgebraId::k16(band), basis);
    table.fill(|t, i, j| {
        let f = family_bracket(Family::K16, &t.basis[i].gen, &t.basis[j].gen);
        t.express(&f)
    });
    table
}

// ---------------------------------------------------------------------------
// JSON fixture format

const TABLE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct BasisDoc {
    id: usize,
    gen: String,
    parity: u8,
    kind: Kind,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    label: Option<String>,
    #[serde(rename = "loop", skip_serializing_if = "Option::is_none", default)]
    loop_base: Option<(i32, usize)>,
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    version: u32,
    algebra: AlgebraId,
    basis: Vec<BasisDoc>,
    brackets: Vec<(usize, usize, Vec<(usize, String)>)>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    incomplete: Vec<(usize, usize)>,
}

impl StructureTable {
    pub fn to_json(&self) -> serde_json::Value {
        let doc = TableDoc {
            version: TABLE_VERSION,
            algebra: self.algebra,
            basis: self
                .basis
                .iter()
                .map(|b| BasisDoc {
                    id: b.id,
                    gen: if b.kind == Kind::Central { "z".into() } else { b.gen.to_string() },
                    parity: b.parity,
                    kind: b.kind,
                    label: b.cartan.map(|c| c.to_string()),
                    loop_base: b.loop_base,
                })
                .collect(),
            brackets: self
                .entries()
                .into_iter()
                .map(|(i, j, e)| (i, j, e.iter().map(|(l, c)| (*l, fmt_rational(c))).collect()))
                .collect(),
            incomplete: self.incomplete.iter().copied().collect(),
        };
        serde_json::to_value(doc).expect("table serializes")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<StructureTable> {
        let doc: TableDoc =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        if doc.version != TABLE_VERSION {
            return Err(Error::Parse(format!("unsupported table version {}", doc.version)));
        }
        doc.algebra.validate()?;
        let k = doc.algebra.k;
        let mut basis = Vec::with_capacity(doc.basis.len());
        for (n, b) in doc.basis.into_iter().enumerate() {
            if b.id != n {
                return Err(Error::Parse(format!("basis ids must be dense, got {} at {n}", b.id)));
            }
            let cartan = b.label.as_deref().map(parse_cartan_label).transpose()?;
            if b.kind == Kind::Central {
                basis.push(BasisElement {
                    id: n,
                    gen: SPoly::zero(k),
                    mono: None,
                    sign: 1,
                    parity: 0,
                    kind: Kind::Central,
                    cartan,
                    loop_base: b.loop_base,
                });
                continue;
            }
            let gen = SPoly::parse(k, &b.gen)?;
            let (mono, c) = gen
                .as_monomial()
                .ok_or_else(|| Error::Parse(format!("basis generator {} is not a monomial", b.gen)))?;
            let sign = if c.is_one() {
                1
            } else if c == int(-1) {
                -1
            } else {
                return Err(Error::Parse(format!("basis generator {} must have coefficient ±1", b.gen)));
            };
            if mono.parity() != b.parity {
                return Err(Error::Parse(format!("parity mismatch for basis element {n}")));
            }
            basis.push(BasisElement {
                id: n,
                gen,
                mono: Some(mono),
                sign,
                parity: b.parity,
                kind: b.kind,
                cartan,
                loop_base: b.loop_base,
            });
        }
        let mut table = StructureTable::from_parts(doc.algebra, basis);
        let n = table.dim();
        for (i, j, e) in doc.brackets {
            let mut exp = Vec::with_capacity(e.len());
            for (l, c) in e {
                if l >= n {
                    return Err(Error::Parse(format!("bracket target {l} out of range")));
                }
                exp.push((l, parse_rational(&c)?));
            }
            table.brackets.insert((i, j), exp);
        }
        table.incomplete = doc.incomplete.into_iter().collect();
        Ok(table)
    }
}

fn parse_cartan_label(s: &str) -> Result<CartanLabel> {
    let bad = || Error::Parse(format!("bad Cartan label {s:?}"));
    let rest = s.strip_prefix('H').ok_or_else(bad)?;
    if let Some(inner) = rest.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        let mut j = 0u32;
        for part in inner.split(',').filter(|p| !p.is_empty()) {
            let i: u32 = part.trim().parse().map_err(|_| bad())?;
            if i == 0 || i > 31 {
                return Err(bad());
            }
            j |= 1 << (i - 1);
        }
        Ok(CartanLabel::Subset(j))
    } else {
        rest.parse().map(CartanLabel::K16).map_err(|_| bad())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::supertrace;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn id_of(t: &StructureTable, s: &str) -> usize {
        let f = SPoly::parse(t.k(), s).unwrap();
        let (m, _) = f.as_monomial().unwrap();
        t.id_of(m).unwrap()
    }

    fn single(i: usize, c: i64) -> Expansion {
        vec![(i, int(c))]
    }

    #[test]
    fn po2_brackets() {
        let t = build_algebra(AlgebraId::po(1)).unwrap();
        assert_eq!(t.dim(), 4);
        let (one, x, y, xy) = (id_of(&t, "1"), id_of(&t, "x1"), id_of(&t, "y1"), id_of(&t, "x1*y1"));
        assert_eq!(t.bracket(x, y).unwrap(), &single(one, 1)[..]);
        assert_eq!(t.bracket(xy, x).unwrap(), &single(x, 1)[..]);
        assert_eq!(t.bracket(xy, y).unwrap(), &single(y, -1)[..]);
        assert_eq!(t.cartan_ids(), vec![one, xy]);
    }

    #[test]
    fn sh2_is_abelian() {
        let t = build_algebra(AlgebraId::sh(1)).unwrap();
        assert_eq!(t.dim(), 2);
        assert!(t.entries().is_empty());
    }

    #[test]
    fn po4_dimensions() {
        let t = build_algebra(AlgebraId::po(2)).unwrap();
        assert_eq!(t.dim(), 16);
        let labels: Vec<_> = t.cartan_ids().iter().map(|&i| t.basis[i].cartan.unwrap()).collect();
        assert_eq!(
            labels,
            vec![
                CartanLabel::Subset(0),
                CartanLabel::Subset(1),
                CartanLabel::Subset(2),
                CartanLabel::Subset(3)
            ]
        );
        let sh = build_algebra(AlgebraId::sh(2)).unwrap();
        assert_eq!(sh.dim(), 14);
        for b in &sh.basis {
            assert!(supertrace(&b.gen).unwrap().is_zero());
        }
    }

    #[test]
    fn k16_cartan_has_eight_elements() {
        let t = build_algebra(AlgebraId::k16(2)).unwrap();
        assert_eq!(t.dim(), 64 * 5);
        let c = t.cartan_ids();
        assert_eq!(c.len(), 8);
        for &i in &c {
            for &j in &c {
                assert!(t.bracket(i, j).unwrap().is_empty());
            }
        }
        assert!(t.incomplete_count() > 0);
    }

    #[test]
    fn antisymmetry_and_jacobi_exhaustive_small() {
        for id in [AlgebraId::po(1), AlgebraId::po(2), AlgebraId::sh(2)] {
            let t = build_algebra(id).unwrap();
            t.check_super_antisymmetry().unwrap();
            for x in 0..t.dim() {
                for y in 0..t.dim() {
                    for z in 0..t.dim() {
                        assert!(t.jacobiator(x, y, z).unwrap().is_empty(), "{id} ({x},{y},{z})");
                    }
                }
            }
        }
    }

    #[test]
    fn jacobi_sampled_k3_and_k16() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for id in [AlgebraId::po(3), AlgebraId::sh(3)] {
            let t = build_algebra(id).unwrap();
            t.check_super_antisymmetry().unwrap();
            for _ in 0..3000 {
                let (x, y, z) = (
                    rng.gen_range(0..t.dim()),
                    rng.gen_range(0..t.dim()),
                    rng.gen_range(0..t.dim()),
                );
                assert!(t.jacobiator(x, y, z).unwrap().is_empty());
            }
        }
        let t = build_algebra(AlgebraId::k16(3)).unwrap();
        t.check_super_antisymmetry().unwrap();
        // t-exponents 0 and 1 keep iterated brackets inside the band
        let inner: Vec<usize> = t
            .basis
            .iter()
            .filter(|b| (0..=1).contains(&b.mono.unwrap().tdeg))
            .map(|b| b.id)
            .collect();
        for _ in 0..3000 {
            let pick = |r: &mut ChaCha8Rng| inner[r.gen_range(0..inner.len())];
            let (x, y, z) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
            assert!(t.jacobiator(x, y, z).unwrap().is_empty());
        }
    }

    #[test]
    fn json_round_trip() {
        for id in [AlgebraId::po(2), AlgebraId::sh(2), AlgebraId::k16(1), AlgebraId::loop_po(1, 1)] {
            let t = build_algebra(id).unwrap();
            let v = t.to_json();
            let back = StructureTable::from_json(&v).unwrap();
            assert_eq!(back.basis, t.basis);
            assert_eq!(back.to_json(), v);
        }
    }

    #[test]
    fn invalid_ids() {
        assert!(build_algebra(AlgebraId { family: Family::K16, k: 2, band: Some(2) }).is_err());
        assert!(build_algebra(AlgebraId { family: Family::Po, k: 0, band: None }).is_err());
        assert!(build_algebra(AlgebraId { family: Family::LoopPo, k: 1, band: Some(0) }).is_err());
    }
}
