//! Verma modules, the contravariant form and Gram determinants.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::casimir::DualAssignment;
use crate::error::{Error, Result};
use crate::exactnum::{bareiss_det, fmt_rational, int, pow_neg2, Coeff, NoCtx, Rational, VarSpace, WPoly, WeightVar};
use crate::liealg::{CartanLabel, Family, StructureTable};
use crate::rootsys::{FullWeight, Quasiroot, RootSystem};
use crate::uea::{Block, PBWMono, RElem, UEAElem, Uea};

/// Linear combination of PBW words in negative roots; the empty word is v_a.
pub type VermaVector<R> = UEAElem<R>;

/// Weight variables of a family, in Cartan order.
pub fn weight_vars(table: &StructureTable, rs: &RootSystem) -> Arc<VarSpace> {
    let vars = rs
        .cartan
        .iter()
        .map(|&h| match (table.algebra.family, table.basis[h].cartan) {
            (Family::Sh, Some(CartanLabel::Subset(j))) => WeightVar::Sh(j),
            (_, Some(CartanLabel::Subset(j))) => WeightVar::Po(j),
            (_, Some(CartanLabel::K16(i))) => WeightVar::K16(i),
            _ => unreachable!("Cartan elements carry labels"),
        })
        .collect();
    VarSpace::new(vars)
}

/// The generic highest weight: a(H) is the variable of H.
pub fn symbolic_weight(space: &Arc<VarSpace>) -> Vec<WPoly> {
    space
        .vars()
        .iter()
        .map(|v| WPoly::var(space.clone(), *v).expect("own variable"))
        .collect()
}

/// Verma module M^a over a table with a triangular decomposition.
pub struct Verma<'a, R: Coeff> {
    pub table: &'a StructureTable,
    pub rs: &'a RootSystem,
    pub uea: Uea<'a>,
    pub ctx: R::Ctx,
    /// a(H) for H in `rs.cartan` order.
    pub weight: Vec<R>,
    pos: Vec<Option<usize>>,
}

impl<'a, R: Coeff> Verma<'a, R> {
    pub fn new(table: &'a StructureTable, rs: &'a RootSystem, ctx: R::Ctx, weight: Vec<R>) -> Result<Self> {
        if weight.len() != rs.rank() {
            return Err(Error::Parse(format!(
                "highest weight has {} coordinates, expected {}",
                weight.len(),
                rs.rank()
            )));
        }
        let mut pos = vec![None; table.dim()];
        for (p, &h) in rs.cartan.iter().enumerate() {
            pos[h] = Some(p);
        }
        Ok(Verma {
            table,
            rs,
            uea: Uea::new(table, rs),
            ctx,
            weight,
            pos,
        })
    }

    pub fn vacuum(&self) -> VermaVector<R> {
        UEAElem::monomial(PBWMono::one(), self.one())
    }

    fn one(&self) -> R {
        R::constant(&self.ctx, int(1))
    }

    /// n·h·e·v_a: zero if e ≠ 1, otherwise a(h) times n·v_a.
    fn project(&self, e: &RElem, c: &R, out: &mut VermaVector<R>) {
        for (m, q) in e {
            if m.0.iter().any(|&(i, _)| self.uea.block(i) == Block::Positive) {
                continue;
            }
            let mut coeff = c.scale(q);
            let mut neg = Vec::new();
            for &(i, ex) in &m.0 {
                match self.uea.block(i) {
                    Block::Negative => neg.push((i, ex)),
                    _ => {
                        let a = match self.pos[i] {
                            Some(p) => &self.weight[p],
                            None => {
                                coeff = coeff.scale(&Rational::zero());
                                continue;
                            }
                        };
                        for _ in 0..ex {
                            coeff = coeff.mul_ref(a);
                        }
                    }
                }
            }
            out.add_term(PBWMono(neg), coeff);
        }
    }

    /// x · v.
    pub fn act(&self, x: usize, v: &VermaVector<R>) -> Result<VermaVector<R>> {
        let mut out = UEAElem::zero();
        for (m, c) in &v.terms {
            let e = self.uea.left_mul(x, m)?;
            self.project(&e, c, &mut out);
        }
        Ok(out)
    }

    /// u · v for an element of the enveloping algebra.
    pub fn apply(&self, u: &UEAElem<Rational>, v: &VermaVector<R>) -> Result<VermaVector<R>> {
        let mut out = UEAElem::zero();
        for (um, uc) in &u.terms {
            for (vm, vc) in &v.terms {
                let e = self.uea.mono_mul(um, vm)?;
                self.project(&e, &vc.scale(uc), &mut out);
            }
        }
        Ok(out)
    }

    /// Coefficient of v_a.
    pub fn vacuum_coeff(&self, v: &VermaVector<R>) -> R {
        v.terms
            .get(&PBWMono::one())
            .cloned()
            .unwrap_or_else(|| R::constant(&self.ctx, Rational::zero()))
    }

    /// σ(u): reversed word of right duals with the super-sign (−1)^{Σ_{i<j} pᵢpⱼ}.
    pub fn sigma(&self, u: &PBWMono, duals: &DualAssignment) -> Result<UEAElem<Rational>> {
        let word = u.word();
        let mut scale = int(1);
        let mut dual_word = Vec::with_capacity(word.len());
        for &y in word.iter().rev() {
            let (d, s) = duals.get(y)?;
            scale *= s;
            dual_word.push(*d);
        }
        let odd = word.iter().filter(|&&y| self.table.parity(y) == 1).count();
        if (odd * odd.saturating_sub(1) / 2) % 2 == 1 {
            scale = -scale;
        }
        Ok(self.uea.normal_form::<Rational>(&NoCtx, &dual_word)?.scale(&scale))
    }

    /// Entry (u, w) = coefficient of v_a in σ(u)·w·v_a.
    pub fn gram_matrix(&self, basis: &[PBWMono], duals: &DualAssignment) -> Result<Vec<Vec<R>>> {
        let mut rows = Vec::with_capacity(basis.len());
        for u in basis {
            let s = self.sigma(u, duals)?;
            let mut row = Vec::with_capacity(basis.len());
            for w in basis {
                let v = UEAElem::monomial(w.clone(), self.one());
                row.push(self.vacuum_coeff(&self.apply(&s, &v)?));
            }
            rows.push(row);
        }
        Ok(rows)
    }
}

/// PBW words in negative roots of total grading −deficit, in a fixed order.
pub fn weight_space_basis(table: &StructureTable, rs: &RootSystem, deficit: &[i64]) -> Vec<PBWMono> {
    let target = rs.height(deficit);
    if target < 0 {
        return Vec::new();
    }
    // negative roots ordered by id = PBW order inside the block
    let roots: Vec<(usize, Vec<i64>, i64, u32)> = rs
        .negative
        .iter()
        .map(|&i| {
            let g: Vec<i64> = rs.grading(i).iter().map(|x| -x).collect();
            let h = rs.height(&g);
            let cap = if table.parity(i) == 1 { 1 } else { u32::MAX };
            (i, g, h, cap)
        })
        .filter(|(_, _, h, _)| *h <= target)
        .collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    basis_dfs(&roots, 0, deficit.to_vec(), target, &mut cur, &mut out);
    out
}

fn basis_dfs(
    roots: &[(usize, Vec<i64>, i64, u32)],
    start: usize,
    remaining: Vec<i64>,
    budget: i64,
    cur: &mut Vec<(usize, u32)>,
    out: &mut Vec<PBWMono>,
) {
    if budget == 0 {
        if remaining.iter().all(|x| *x == 0) {
            out.push(PBWMono(cur.clone()));
        }
        return;
    }
    for r in start..roots.len() {
        let (id, g, h, cap) = &roots[r];
        let mut rem = remaining.clone();
        let mut n = 1u32;
        while n <= *cap && h * n as i64 <= budget {
            for (x, y) in rem.iter_mut().zip(g) {
                *x -= y;
            }
            cur.push((*id, n));
            basis_dfs(roots, r + 1, rem.clone(), budget - h * n as i64, cur, out);
            cur.pop();
            n += 1;
        }
    }
}

/// Distinct deficits of weight spaces up to a height bound, ascending by height.
pub fn block_deficits(quasiroots: &[Quasiroot], rs: &RootSystem) -> Vec<Vec<i64>> {
    let set: BTreeSet<(i64, Vec<i64>)> = quasiroots
        .iter()
        .map(|q| (rs.height(&q.grading), q.grading.clone()))
        .collect();
    set.into_iter().map(|(_, g)| g).collect()
}

/// One weight space with its Gram matrix and determinant.
#[derive(Clone, Debug)]
pub struct GramBlock {
    pub deficit: Vec<i64>,
    pub basis: Vec<PBWMono>,
    pub matrix: Vec<Vec<WPoly>>,
    pub det: WPoly,
}

pub fn gram_block(verma: &Verma<WPoly>, duals: &DualAssignment, deficit: &[i64]) -> Result<GramBlock> {
    let basis = weight_space_basis(verma.table, verma.rs, deficit);
    let matrix = verma.gram_matrix(&basis, duals)?;
    let det = bareiss_det(&verma.ctx, &matrix)?;
    Ok(GramBlock {
        deficit: deficit.to_vec(),
        basis,
        matrix,
        det,
    })
}

/// A candidate linear factor and the quasiroots producing it.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub betas: Vec<Quasiroot>,
    pub linear: WPoly,
}

/// L_β for every quasiroot, merged when they agree up to a scalar.
pub fn candidate_factors(
    table: &StructureTable,
    rs: &RootSystem,
    space: &Arc<VarSpace>,
    quasiroots: &[Quasiroot],
) -> Vec<Candidate> {
    let a = symbolic_weight(space);
    let rho = rs.rho(table);
    let mut by_monic: BTreeMap<String, Candidate> = BTreeMap::new();
    for q in quasiroots {
        let l = rs.linear_factor(space, &a, &rho, &q.weight);
        let key = if l.is_zero() { "0".to_string() } else { l.monic().to_string() };
        by_monic
            .entry(key)
            .or_insert_with(|| Candidate { betas: Vec::new(), linear: l.clone() })
            .betas
            .push(q.clone());
    }
    by_monic.into_values().collect()
}

#[derive(Clone, Debug)]
pub struct FactorReport {
    /// (candidate index, multiplicity) for multiplicities ≥ 1.
    pub factors: Vec<(usize, u32)>,
    pub residual: WPoly,
    /// Candidates that vanish identically.
    pub zero_candidates: usize,
}

impl FactorReport {
    pub fn passed(&self) -> bool {
        self.residual.as_constant().is_some_and(|c| !c.is_zero())
    }
}

/// Divide out every candidate as often as it goes.
pub fn shapovalov_det(det: &WPoly, candidates: &[Candidate]) -> Result<FactorReport> {
    if det.is_zero() {
        return Err(Error::Degenerate("Gram determinant vanishes identically".into()));
    }
    let mut residual = det.clone();
    let mut factors = Vec::new();
    let mut zero_candidates = 0;
    for (n, c) in candidates.iter().enumerate() {
        if c.linear.is_zero() {
            zero_candidates += 1;
            continue;
        }
        let mut mult = 0;
        while let Some(q) = residual.trial_divide(&c.linear)? {
            residual = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((n, mult));
        }
    }
    Ok(FactorReport {
        factors,
        residual,
        zero_candidates,
    })
}

/// Quasiroots β with L_β(a) = 0 for a numeric weight.
pub fn irreducible(
    table: &StructureTable,
    rs: &RootSystem,
    a: &FullWeight,
    quasiroots: &[Quasiroot],
) -> Vec<Quasiroot> {
    let rho = rs.rho(table);
    quasiroots
        .iter()
        .filter(|q| rs.linear_factor(&NoCtx, &a.coords, &rho, &q.weight).is_zero())
        .cloned()
        .collect()
}

/// Verdicts of the abstract and the displayed explicit criterion for one β.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CriterionVerdicts {
    /// 2(a+ρ, β) = (β, β)
    pub abstract_vanishes: bool,
    /// the displayed inequality fails
    pub explicit_vanishes: bool,
}

/// Evaluate both forms of the criterion at a and b = a − β.
pub fn explicit_criterion_check(
    table: &StructureTable,
    rs: &RootSystem,
    a: &FullWeight,
    beta: &FullWeight,
) -> CriterionVerdicts {
    let rho = rs.rho(table);
    let abstract_vanishes = rs.linear_factor(&NoCtx, &a.coords, &rho, beta).is_zero();
    let b = a.sub(beta);
    let coord = |w: &FullWeight, label: CartanLabel| -> Rational {
        table
            .cartan_id(label)
            .and_then(|id| rs.cartan.iter().position(|&h| h == id))
            .map(|p| w.coords[p].clone())
            .unwrap_or_else(Rational::zero)
    };
    let (lhs, rhs) = match table.algebra.family {
        Family::K16 => {
            let c = |w: &FullWeight, i: u8| coord(w, CartanLabel::K16(i));
            let mut lhs = Rational::zero();
            let mut rhs = Rational::zero();
            for i in 1..=4u8 {
                lhs += c(a, i) * c(a, i + 4);
                rhs += c(a, i) * c(&b, i + 4) + c(&b, i) * c(a, i + 4) + c(&b, i) * c(&b, i + 4);
            }
            rhs += int(-4) * c(&b, 5) - int(2) * c(&b, 6) + int(4) * c(&b, 8);
            (lhs, rhs)
        }
        _ => {
            let k = table.k();
            let full = (1u32 << k) - 1;
            let c = |w: &FullWeight, j: u32| coord(w, CartanLabel::Subset(j));
            let mut lhs = Rational::zero();
            let mut rhs = Rational::zero();
            for j in 0..=full {
                let js = full & !j;
                lhs += c(a, j) * c(a, js);
                rhs += c(a, j) * c(&b, js) + c(&b, j) * c(a, js) + c(&b, j) * c(&b, js);
            }
            rhs -= pow_neg2(k as i32 - 1) * c(&b, full & !(1 << (k - 1)));
            (lhs, rhs)
        }
    };
    CriterionVerdicts {
        abstract_vanishes,
        explicit_vanishes: lhs == rhs,
    }
}

/// Deficits whose Gram determinant vanishes at a numeric weight.
pub fn singular_blocks(
    verma: &Verma<Rational>,
    duals: &DualAssignment,
    deficits: &[Vec<i64>],
) -> Result<Vec<Vec<i64>>> {
    let mut out = Vec::new();
    for d in deficits {
        let basis = weight_space_basis(verma.table, verma.rs, d);
        if basis.is_empty() {
            continue;
        }
        let m = verma.gram_matrix(&basis, duals)?;
        if bareiss_det(&NoCtx, &m)?.is_zero() {
            out.push(d.clone());
        }
    }
    Ok(out)
}

/// JSON for `gram` / `shapdet`.
pub fn block_json(
    verma: &Verma<WPoly>,
    block: &GramBlock,
    report: Option<(&FactorReport, &[Candidate])>,
) -> Value {
    let table = verma.table;
    let mut v = json!({
        "version": 1,
        "family": table.algebra.family,
        "k": table.k(),
        "deficit": block.deficit,
        "basis": block.basis.iter().map(|m| verma.uea.format_mono(m)).collect::<Vec<_>>(),
        "matrix": block.matrix.iter()
            .map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "det": block.det.to_string(),
    });
    if let Some((rep, cands)) = report {
        v["factors"] = Value::Array(
            rep.factors
                .iter()
                .map(|&(n, mult)| {
                    let c = &cands[n];
                    json!({
                        "beta": c.betas.iter().map(|q| q.describe(table)).collect::<Vec<_>>(),
                        "linear": c.linear.to_string(),
                        "multiplicity": mult,
                    })
                })
                .collect(),
        );
        v["residual"] = Value::String(rep.residual.to_string());
        v["passed"] = Value::Bool(rep.passed());
    }
    v
}

/// Numeric weight from labelled coordinates, e.g. `{"a{1}": "1/2"}`.
pub fn weight_from_map(space: &VarSpace, map: &BTreeMap<String, Rational>) -> Result<FullWeight> {
    let mut coords = Vec::with_capacity(space.vars().len());
    for v in space.vars() {
        let name = v.to_string();
        coords.push(
            map.get(&name)
                .cloned()
                .ok_or_else(|| Error::Parse(format!("weight is missing coordinate {name}")))?,
        );
    }
    if map.len() != coords.len() {
        let known: BTreeSet<String> = space.vars().iter().map(|v| v.to_string()).collect();
        if let Some(extra) = map.keys().find(|k| !known.contains(*k)) {
            return Err(Error::Parse(format!("unknown weight coordinate {extra}")));
        }
    }
    Ok(FullWeight { coords })
}

pub fn weight_to_json(space: &VarSpace, w: &FullWeight) -> Value {
    let m: serde_json::Map<String, Value> = space
        .vars()
        .iter()
        .zip(&w.coords)
        .map(|(v, c)| (v.to_string(), Value::String(fmt_rational(c))))
        .collect();
    Value::Object(m)
}

pub fn one_of(space: &Arc<VarSpace>) -> WPoly {
    WPoly::constant(space.clone(), Rational::one())
}

/// Outcome of the truncated centrality test on a k16 Verma module.
#[derive(Clone, Debug)]
pub struct WindowReport {
    /// C·v_a when it is a multiple of v_a.
    pub eigenvalue: Option<WPoly>,
    /// Negative roots f (with deficit ≤ window) where [C, f]·v_a ≠ 0.
    pub failures: Vec<(usize, VermaVector<WPoly>)>,
    pub checked: usize,
}

impl WindowReport {
    pub fn passed(&self) -> bool {
        self.eigenvalue.is_some() && self.failures.is_empty()
    }
}

/// C acts on v_a by a scalar and commutes with every negative root vector f
/// of deficit at most `window` on v_a. Out-of-band entries surface as errors.
pub fn window_centrality(
    verma: &Verma<WPoly>,
    c: &UEAElem<Rational>,
    window: i64,
) -> Result<WindowReport> {
    let cv = verma.apply(c, &verma.vacuum())?;
    let eigenvalue = match cv.terms.len() {
        0 => Some(WPoly::zero(verma.ctx.clone())),
        1 => cv.terms.get(&PBWMono::one()).cloned(),
        _ => None,
    };
    let lambda = eigenvalue.clone().unwrap_or_else(|| WPoly::zero(verma.ctx.clone()));
    let roots: Vec<usize> = verma
        .rs
        .negative
        .iter()
        .copied()
        .filter(|&f| -verma.rs.graded(f).lead <= window)
        .collect();
    let mut failures = Vec::new();
    for &f in &roots {
        let fv = verma.act(f, &verma.vacuum())?;
        let lhs = verma.apply(c, &fv)?;
        let mut diff = lhs;
        for (m, q) in &fv.terms {
            diff.add_term(m.clone(), q.mul_ref(&lambda).neg_ref());
        }
        if !diff.is_zero() {
            failures.push((f, diff));
        }
    }
    Ok(WindowReport {
        eigenvalue,
        failures,
        checked: roots.len(),
    })
}

const GRID_VALUES: [(i64, i64); 12] = [
    (-3, 1),
    (-2, 1),
    (-3, 2),
    (-1, 1),
    (-1, 2),
    (0, 1),
    (1, 2),
    (1, 1),
    (3, 2),
    (2, 1),
    (5, 2),
    (3, 1),
];

/// Move `w` onto the zero set of a linear polynomial by solving for its
/// first variable with a nonzero coefficient.
fn onto_locus(w: &mut FullWeight, l: &WPoly) -> bool {
    let n = w.coords.len();
    let mut lin = vec![Rational::zero(); n];
    let mut c0 = Rational::zero();
    for (m, c) in l.terms() {
        match m.degree() {
            0 => c0 += c,
            1 => lin[m.0.iter().position(|&e| e == 1).expect("linear monomial")] += c,
            _ => return false,
        }
    }
    let Some(v) = lin.iter().position(|c| !c.is_zero()) else {
        return false;
    };
    let rest = (0..n)
        .filter(|&j| j != v)
        .fold(c0, |acc, j| acc + &lin[j] * &w.coords[j]);
    w.coords[v] = -rest / &lin[v];
    true
}

/// Deterministic grid of rational weights; every third point is moved onto
/// the zero set of a candidate factor, cycling through the candidates.
pub fn weight_grid(rank: usize, candidates: &[Candidate], n: usize) -> Vec<FullWeight> {
    let live: Vec<&Candidate> = candidates.iter().filter(|c| !c.linear.is_zero()).collect();
    (0..n)
        .map(|i| {
            let mut w = FullWeight {
                coords: (0..rank)
                    .map(|j| {
                        let (p, q) = GRID_VALUES[(7 * i + 5 * j * j + 3 * i * j + j) % GRID_VALUES.len()];
                        Rational::new(p.into(), q.into())
                    })
                    .collect(),
            };
            if i % 3 == 0 && !live.is_empty() {
                onto_locus(&mut w, &live[(i / 3) % live.len()].linear);
            }
            w
        })
        .collect()
}

/// One grid point of the reconciliation table.
#[derive(Clone, Debug)]
pub struct ReconcileRow {
    pub weight: FullWeight,
    pub abstract_reducible: bool,
    pub explicit_reducible: bool,
    pub gram_reducible: bool,
    pub witnesses: Vec<String>,
    pub singular: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct ReconcileReport {
    pub bound: i64,
    pub rows: Vec<ReconcileRow>,
}

impl ReconcileReport {
    fn count(&self, f: impl Fn(&ReconcileRow) -> bool) -> usize {
        self.rows.iter().filter(|r| f(r)).count()
    }

    pub fn abstract_vs_gram(&self) -> usize {
        self.count(|r| r.abstract_reducible == r.gram_reducible)
    }

    pub fn explicit_vs_gram(&self) -> usize {
        self.count(|r| r.explicit_reducible == r.gram_reducible)
    }

    pub fn abstract_vs_explicit(&self) -> usize {
        self.count(|r| r.abstract_reducible == r.explicit_reducible)
    }

    pub fn passed(&self) -> bool {
        self.abstract_vs_gram() == self.rows.len()
    }

    pub fn to_json(&self, table: &StructureTable, space: &VarSpace) -> Value {
        let pct = |n: usize| {
            if self.rows.is_empty() {
                Value::Null
            } else {
                json!(format!("{:.1}", 100.0 * n as f64 / self.rows.len() as f64))
            }
        };
        json!({
            "version": 1,
            "family": table.algebra.family,
            "k": table.k(),
            "band": table.algebra.band,
            "height": self.bound,
            "points": self.rows.len(),
            "agreement": {
                "abstract_gram": self.abstract_vs_gram(),
                "explicit_gram": self.explicit_vs_gram(),
                "abstract_explicit": self.abstract_vs_explicit(),
                "abstract_gram_pct": pct(self.abstract_vs_gram()),
                "explicit_gram_pct": pct(self.explicit_vs_gram()),
                "abstract_explicit_pct": pct(self.abstract_vs_explicit()),
            },
            "rows": self.rows.iter().map(|r| json!({
                "weight": weight_to_json(space, &r.weight),
                "abstract": if r.abstract_reducible { "reducible" } else { "irreducible" },
                "explicit": if r.explicit_reducible { "reducible" } else { "irreducible" },
                "gram": if r.gram_reducible { "reducible" } else { "irreducible" },
                "witnesses": r.witnesses,
                "singular_blocks": r.singular,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Abstract criterion, explicit displayed criterion and the Gram oracle at
/// every grid point, all up to the same height bound.
pub fn reconcile(
    table: &StructureTable,
    rs: &RootSystem,
    duals: &DualAssignment,
    grid: &[FullWeight],
    bound: i64,
) -> Result<ReconcileReport> {
    let quasiroots = rs.enumerate_quasiroots(table, bound);
    let deficits = block_deficits(&quasiroots, rs);
    let mut rows = Vec::with_capacity(grid.len());
    for a in grid {
        let witnesses = irreducible(table, rs, a, &quasiroots);
        let explicit_reducible = quasiroots
            .iter()
            .any(|q| explicit_criterion_check(table, rs, a, &q.weight).explicit_vanishes);
        let verma = Verma::<Rational>::new(table, rs, NoCtx, a.coords.clone())?;
        let singular = singular_blocks(&verma, duals, &deficits)?;
        rows.push(ReconcileRow {
            weight: a.clone(),
            abstract_reducible: !witnesses.is_empty(),
            explicit_reducible,
            gram_reducible: !singular.is_empty(),
            witnesses: witnesses.iter().map(|q| q.describe(table)).collect(),
            singular,
        });
    }
    Ok(ReconcileReport { bound, rows })
}
