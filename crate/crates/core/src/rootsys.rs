//! Weights, positivity, quasiroots and the weight pairing.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::casimir::{bilinear_b, casimir_linear_part};
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, int, pow_neg2, Coeff, Rational};
use crate::liealg::{family_bracket, CartanLabel, Expansion, Family, Kind, StructureTable};

/// `(lead; d)`: E-weight (po/sh) or H₄-weight (k16), then α − β.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradedWeight {
    pub lead: i64,
    pub d: Vec<i64>,
}

impl fmt::Display for GradedWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.d.iter().map(i64::to_string).collect();
        write!(f, "({}; {})", self.lead, d.join(", "))
    }
}

/// Coordinates over the full Cartan basis, in `table.cartan_ids()` order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FullWeight {
    pub coords: Vec<Rational>,
}

impl FullWeight {
    pub fn zero(n: usize) -> Self {
        FullWeight { coords: vec![Rational::zero(); n] }
    }

    pub fn add(&self, other: &FullWeight) -> FullWeight {
        FullWeight {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &FullWeight) -> FullWeight {
        FullWeight {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> FullWeight {
        FullWeight {
            coords: self.coords.iter().map(|a| a * r).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

/// An ℕ-combination of positive roots, odd multiplicities at most 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quasiroot {
    pub mult: BTreeMap<usize, u32>,
    pub weight: FullWeight,
    /// Sum of the grading weights, see [`RootSystem::grading`].
    pub grading: Vec<i64>,
}

impl Quasiroot {
    pub fn describe(&self, table: &StructureTable) -> String {
        let parts: Vec<String> = self
            .mult
            .iter()
            .map(|(&i, &n)| {
                let l = table.basis[i].label();
                if n == 1 {
                    l
                } else {
                    format!("{n}*{l}")
                }
            })
            .collect();
        parts.join(" + ")
    }
}

fn lex_sign(v: &[i64]) -> Option<Sign> {
    match v.iter().find(|x| **x != 0) {
        Some(x) if *x > 0 => Some(Sign::Positive),
        Some(_) => Some(Sign::Negative),
        None => None,
    }
}

/// Graded weight of a monomial basis element.
pub fn weight_of(table: &StructureTable, id: usize) -> Result<GradedWeight> {
    let b = &table.basis[id];
    let mono = b
        .mono
        .ok_or_else(|| Error::InvalidAlgebra(format!("basis element {id} has no monomial")))?;
    let k = table.k();
    let (alpha, beta) = mono.mask.split(k);
    let deg = mono.mask.degree() as i64;
    let d = (0..k)
        .map(|i| (alpha >> i & 1) as i64 - (beta >> i & 1) as i64)
        .collect();
    let lead = match table.algebra.family.base() {
        Family::K16 => 2 * (mono.tdeg as i64 - 1) + deg,
        _ => deg - 2,
    };
    Ok(GradedWeight { lead, d })
}

/// Eigenvalues of the diagonalizing Cartan part: d for po/sh, and
/// (H₄; H₁, H₂, H₃) = (lead; −d) for k16, where the contact bracket
/// carries −{f, g}_P and so ξᵢηᵢ acts on ξᵢ by −1.
fn eigen_key(family: Family, w: &GradedWeight) -> Vec<i64> {
    match family.base() {
        Family::K16 => std::iter::once(w.lead).chain(w.d.iter().map(|x| -x)).collect(),
        _ => w.d.clone(),
    }
}

/// Positive iff the eigenvalue tuple is lexicographically positive.
pub fn positivity(table: &StructureTable, id: usize) -> Result<Sign> {
    if table.basis[id].kind != Kind::Root {
        return Err(Error::CartanElement(table.basis[id].label()));
    }
    let w = weight_of(table, id)?;
    lex_sign(&eigen_key(table.algebra.family, &w)).ok_or_else(|| Error::ZeroWeight(table.basis[id].label()))
}

/// coords[J] = coefficient of x in [H_J, x].
pub fn full_weight_of(table: &StructureTable, id: usize) -> Result<FullWeight> {
    let x = &table.basis[id];
    if x.kind != Kind::Root {
        return Err(Error::CartanElement(x.label()));
    }
    let mono = x.mono.expect("root vectors are monomials");
    let family = table.algebra.family;
    let coords = table
        .cartan_ids()
        .into_iter()
        .map(|h| {
            let r = family_bracket(family, &table.basis[h].gen, &x.gen);
            r.coeff(mono) * int(x.sign)
        })
        .collect();
    Ok(FullWeight { coords })
}

fn invert(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for v in a[c].iter_mut() {
            *v *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot = a[c].clone();
                for (v, pv) in a[r].iter_mut().zip(&pivot) {
                    *v -= &f * pv;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Root data of a finite or banded algebra, computed once from its table.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub family: Family,
    pub k: usize,
    pub cartan: Vec<usize>,
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
    sign: Vec<Option<Sign>>,
    graded: Vec<Option<GradedWeight>>,
    full: Vec<Option<FullWeight>>,
    gram: Vec<Vec<Rational>>,
    gram_inv: Vec<Vec<Rational>>,
}

impl RootSystem {
    pub fn new(table: &StructureTable) -> Result<RootSystem> {
        let family = table.algebra.family;
        if family.is_loop() {
            return Err(Error::InvalidAlgebra(format!("no root system for {}", table.algebra)));
        }
        let cartan = table.cartan_ids();
        let n = table.dim();
        let mut sign = vec![None; n];
        let mut graded = vec![None; n];
        let mut full = vec![None; n];
        let (mut positive, mut negative) = (Vec::new(), Vec::new());
        for i in 0..n {
            graded[i] = Some(weight_of(table, i)?);
            if table.basis[i].kind != Kind::Root {
                continue;
            }
            let s = positivity(table, i)?;
            sign[i] = Some(s);
            full[i] = Some(full_weight_of(table, i)?);
            match s {
                Sign::Positive => positive.push(i),
                Sign::Negative => negative.push(i),
            }
        }
        let gram: Vec<Vec<Rational>> = cartan
            .iter()
            .map(|&i| cartan.iter().map(|&j| bilinear_b(table, i, j)).collect())
            .collect();
        let gram_inv = invert(&gram).ok_or(Error::SingularCartanGram)?;
        Ok(RootSystem {
            family,
            k: table.k(),
            cartan,
            positive,
            negative,
            sign,
            graded,
            full,
            gram,
            gram_inv,
        })
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn sign(&self, id: usize) -> Option<Sign> {
        self.sign[id]
    }

    pub fn is_positive(&self, id: usize) -> bool {
        self.sign[id] == Some(Sign::Positive)
    }

    pub fn is_negative(&self, id: usize) -> bool {
        self.sign[id] == Some(Sign::Negative)
    }

    pub fn graded(&self, id: usize) -> &GradedWeight {
        self.graded[id].as_ref().expect("weight of a monomial element")
    }

    pub fn full_weight(&self, id: usize) -> Result<&FullWeight> {
        self.full[id].as_ref().ok_or(Error::CartanElement(format!("basis element {id}")))
    }

    /// Block grading of a basis element: d for po/sh, (lead; −d) for k16.
    pub fn grading(&self, id: usize) -> Vec<i64> {
        eigen_key(self.family, self.graded(id))
    }

    /// Strictly positive on positive roots:
    /// φ(d) = Σ Nᵏ⁻ⁱ dᵢ with N = 4k + 1; k16 puts the H₄ level above that.
    pub fn height(&self, grading: &[i64]) -> i64 {
        let n = 4 * self.k as i64 + 1;
        let phi = |d: &[i64]| d.iter().fold(0i64, |acc, x| acc * n + x);
        match self.family {
            Family::K16 => {
                let span: i64 = (0..self.k as u32).map(|e| n.pow(e)).sum();
                grading[0] * (span + 1) + phi(&grading[1..])
            }
            _ => phi(grading),
        }
    }

    pub fn root_height(&self, id: usize) -> i64 {
        self.height(&self.grading(id))
    }

    /// B(H_J, H_J') over the Cartan basis.
    pub fn cartan_gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    /// x·G⁻¹·y.
    pub fn pairing(&self, x: &FullWeight, y: &FullWeight) -> Rational {
        self.pair_with(&crate::exactnum::NoCtx, &x.coords, y)
    }

    /// The same pairing with coefficients from any ring on the left.
    pub fn pair_with<R: Coeff>(&self, ctx: &R::Ctx, x: &[R], y: &FullWeight) -> R {
        let n = self.rank();
        let mut out = R::constant(ctx, Rational::zero());
        for i in 0..n {
            let mut c = Rational::zero();
            for j in 0..n {
                c += &self.gram_inv[i][j] * &y.coords[j];
            }
            if !c.is_zero() {
                out = out.add_ref(&x[i].scale(&c));
            }
        }
        out
    }

    /// Weight of a Cartan element h: λ(H_J) = B(h, H_J).
    pub fn weight_of_element(&self, table: &StructureTable, h: &[(usize, Rational)]) -> FullWeight {
        let coords = self
            .cartan
            .iter()
            .map(|&j| {
                h.iter()
                    .fold(Rational::zero(), |acc, (i, c)| acc + c * bilinear_b(table, *i, j))
            })
            .collect();
        FullWeight { coords }
    }

    /// The ρ-element as printed: 2H₅ + H₆ − 2H₈ (k16), (−2)ᵏ⁻²H_{I∖{k}} (po/sh).
    /// For po/sh this is minus half the linear Casimir term; see [`Self::rho`].
    pub fn stated_rho_element(&self, table: &StructureTable) -> Expansion {
        match self.family {
            Family::K16 => {
                let h = |i: u8| table.cartan_id(CartanLabel::K16(i)).expect("k16 Cartan");
                vec![(h(5), int(2)), (h(6), int(1)), (h(8), int(-2))]
            }
            _ => {
                let k = self.k;
                let j = ((1u32 << k) - 1) & !(1 << (k - 1));
                match table.cartan_id(CartanLabel::Subset(j)) {
                    Some(id) => vec![(id, pow_neg2(k as i32 - 2))],
                    None => Vec::new(),
                }
            }
        }
    }

    /// Half the weight of the linear Casimir term, so that C acts on v_a by
    /// (a, a + 2ρ). Agrees with the printed element for k16 and is its
    /// negative for po/sh; only this sign factors the Gram determinants.
    pub fn rho(&self, table: &StructureTable) -> FullWeight {
        self.weight_of_element(table, &casimir_linear_part(table))
            .scale(&Rational::new(1.into(), 2.into()))
    }

    /// Σ_{even α>0} α − Σ_{odd α>0} α.
    pub fn signed_root_sum(&self, table: &StructureTable) -> FullWeight {
        let mut acc = FullWeight::zero(self.rank());
        for &i in &self.positive {
            let w = self.full[i].as_ref().unwrap();
            acc = if table.parity(i) == 0 { acc.add(w) } else { acc.sub(w) };
        }
        acc
    }

    /// All quasiroots of height at most `bound`, in a deterministic order.
    pub fn enumerate_quasiroots(&self, table: &StructureTable, bound: i64) -> Vec<Quasiroot> {
        let roots: Vec<(usize, i64, u32)> = self
            .positive
            .iter()
            .map(|&i| (i, self.root_height(i), if table.parity(i) == 1 { 1 } else { u32::MAX }))
            .filter(|(_, h, _)| *h <= bound)
            .collect();
        let mut out = Vec::new();
        let mut current: Vec<(usize, u32)> = Vec::new();
        self.quasiroot_dfs(&roots, 0, bound, &mut current, &mut out);
        out
    }

    fn quasiroot_dfs(
        &self,
        roots: &[(usize, i64, u32)],
        start: usize,
        budget: i64,
        current: &mut Vec<(usize, u32)>,
        out: &mut Vec<Quasiroot>,
    ) {
        for r in start..roots.len() {
            let (id, h, cap) = roots[r];
            let mut n = 1u32;
            while n <= cap && h * n as i64 <= budget {
                current.push((id, n));
                out.push(self.make_quasiroot(current));
                self.quasiroot_dfs(roots, r + 1, budget - h * n as i64, current, out);
                current.pop();
                n += 1;
            }
        }
    }

    fn make_quasiroot(&self, mult: &[(usize, u32)]) -> Quasiroot {
        let mut weight = FullWeight::zero(self.rank());
        let mut grading: Option<Vec<i64>> = None;
        for &(id, n) in mult {
            let nn = int(n as i64);
            weight = weight.add(&self.full[id].as_ref().unwrap().scale(&nn));
            let g: Vec<i64> = self.grading(id).iter().map(|x| x * n as i64).collect();
            grading = Some(match grading {
                None => g,
                Some(acc) => acc.iter().zip(&g).map(|(a, b)| a + b).collect(),
            });
        }
        Quasiroot {
            mult: mult.iter().copied().collect(),
            weight,
            grading: grading.unwrap_or_default(),
        }
    }

    /// L_β(a) = 2(a + ρ, β) − (β, β) for coordinates of a in any ring.
    pub fn linear_factor<R: Coeff>(
        &self,
        ctx: &R::Ctx,
        a: &[R],
        rho: &FullWeight,
        beta: &FullWeight,
    ) -> R {
        let c = int(2) * self.pairing(rho, beta) - self.pairing(beta, beta);
        self.pair_with(ctx, a, beta).scale(&int(2)).add_ref(&R::constant(ctx, c))
    }
}

/// Problems found by the positivity-closure checks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TriangularityReport {
    pub violations: Vec<String>,
    pub skipped: usize,
}

impl TriangularityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// [n⁺, n⁺] ⊆ n⁺, [h, n⁺] ⊆ n⁺, and the mirror statements for n⁻.
pub fn check_triangularity(table: &StructureTable, rs: &RootSystem) -> TriangularityReport {
    let mut report = TriangularityReport::default();
    let mut visit = |i: usize, j: usize, want: Sign| match table.bracket(i, j) {
        Err(_) => report.skipped += 1,
        Ok(e) => {
            for (l, _) in e {
                if rs.sign(*l) != Some(want) {
                    report.violations.push(format!(
                        "[{}, {}] has component {}",
                        table.basis[i].label(),
                        table.basis[j].label(),
                        table.basis[*l].label()
                    ));
                }
            }
        }
    };
    for (side, want) in [(&rs.positive, Sign::Positive), (&rs.negative, Sign::Negative)] {
        for &i in side {
            for &j in side {
                visit(i, j, want);
            }
            for &h in &rs.cartan {
                visit(h, i, want);
            }
        }
    }
    let roots = table.dim() - rs.cartan.len() - table.central_id().map_or(0, |_| 1);
    if table.algebra.band.is_none()
        && (rs.positive.len() != rs.negative.len() || 2 * rs.positive.len() != roots)
    {
        report.violations.push(format!(
            "{} positive and {} negative roots out of {roots}",
            rs.positive.len(),
            rs.negative.len()
        ));
    }
    report
}

/// Root-system dump.
pub fn roots_json(table: &StructureTable, rs: &RootSystem) -> Value {
    let labels: Vec<String> = rs.cartan.iter().map(|&i| table.basis[i].label()).collect();
    let fw = |w: &FullWeight| -> Value {
        let m: serde_json::Map<String, Value> = labels
            .iter()
            .zip(&w.coords)
            .map(|(l, c)| (l.clone(), Value::String(fmt_rational(c))))
            .collect();
        Value::Object(m)
    };
    let mut roots = Vec::new();
    for i in 0..table.dim() {
        let Some(s) = rs.sign(i) else { continue };
        let g = rs.graded(i);
        roots.push(json!({
            "id": i,
            "gen": table.basis[i].gen.to_string(),
            "weight": std::iter::once(g.lead).chain(g.d.iter().copied()).collect::<Vec<_>>(),
            "full_weight": fw(rs.full[i].as_ref().unwrap()),
            "parity": table.parity(i),
            "sign": if s == Sign::Positive { "positive" } else { "negative" },
        }));
    }
    json!({
        "version": 1,
        "algebra": table.algebra,
        "cartan": labels,
        "roots": roots,
        "rho": fw(&rs.rho(table)),
    })
}
