//! Invariant forms, dual bases and the quadratic Casimir elements.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rational, int, pow_neg2, Coeff, NoCtx, Rational};
use crate::liealg::{CartanLabel, Family, Kind, StructureTable};
use crate::rootsys::{FullWeight, RootSystem};
use crate::superpoly::{SPoly, SuperMono, CONV_SIGN};
use crate::uea::{UEAElem, Uea};

/// B(f, g): Berezin integral of fg (po/sh) or its residue (k16), both
/// oriented by `conv`.
pub fn form_value_with(family: Family, f: &SPoly, g: &SPoly, conv: i64) -> Result<Rational> {
    let fg = f.smul(g)?;
    Ok(match family.base() {
        Family::K16 => fg.raw_residue() * int(conv),
        _ => fg.top_coefficient()? * int(conv),
    })
}

pub fn form_value(family: Family, f: &SPoly, g: &SPoly) -> Result<Rational> {
    form_value_with(family, f, g, CONV_SIGN)
}

fn form_on_basis(table: &StructureTable, i: usize, j: usize, conv: i64) -> Rational {
    let (x, y) = (&table.basis[i], &table.basis[j]);
    if table.algebra.family.is_loop() {
        return match (x.kind, y.kind) {
            (Kind::Central, Kind::Central) => int(1),
            (Kind::Central, _) | (_, Kind::Central) => Rational::zero(),
            _ => {
                let (m, n) = (x.mono.unwrap().tdeg, y.mono.unwrap().tdeg);
                if m + n != 0 {
                    return Rational::zero();
                }
                form_value_with(Family::Po, &x.gen, &y.gen, conv).expect("t-degrees cancel")
            }
        };
    }
    form_value_with(table.algebra.family, &x.gen, &y.gen, conv).expect("same k, t-free product")
}

/// B on two basis elements of a table (the affine form B⁽¹⁾ for loop families).
pub fn bilinear_b(table: &StructureTable, i: usize, j: usize) -> Rational {
    form_on_basis(table, i, j, CONV_SIGN)
}

/// The monomial B pairs a basis monomial with.
fn partner(table: &StructureTable, i: usize) -> Option<usize> {
    let b = &table.basis[i];
    let k = table.k();
    match b.mono {
        None => Some(i),
        Some(m) => {
            let tdeg = match table.algebra.family {
                Family::K16 => -m.tdeg - 1,
                Family::LoopPo | Family::LoopSh => -m.tdeg,
                _ => 0,
            };
            table.id_of(SuperMono {
                tdeg,
                mask: m.mask.complement(k),
            })
        }
    }
}

/// Sparse matrix of B over a table's basis.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantForm {
    pub family: Family,
    pub conv_sign: i64,
    pub entries: BTreeMap<(usize, usize), Rational>,
}

impl InvariantForm {
    pub fn new(table: &StructureTable) -> Self {
        Self::with_sign(table, CONV_SIGN)
    }

    /// The form under an explicit orientation (used to show the calibration).
    pub fn with_sign(table: &StructureTable, conv: i64) -> Self {
        let mut entries = BTreeMap::new();
        for i in 0..table.dim() {
            if let Some(j) = partner(table, i) {
                let v = form_on_basis(table, i, j, conv);
                if !v.is_zero() {
                    entries.insert((i, j), v);
                }
            }
        }
        InvariantForm {
            family: table.algebra.family,
            conv_sign: conv,
            entries,
        }
    }

    pub fn value(&self, i: usize, j: usize) -> Rational {
        self.entries.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    /// B on linear combinations.
    pub fn eval(&self, x: &[(usize, Rational)], y: &[(usize, Rational)]) -> Rational {
        let mut s = Rational::zero();
        for (i, a) in x {
            for (j, b) in y {
                let v = self.value(*i, *j);
                if !v.is_zero() {
                    s += a * b * v;
                }
            }
        }
        s
    }

    /// B(y, x) = (−1)^{p(x)p(y)} B(x, y), and B(x, y) = 0 unless p(x) = p(y).
    pub fn check_supersymmetric(&self, table: &StructureTable) -> Result<()> {
        for (&(i, j), v) in &self.entries {
            if table.parity(i) != table.parity(j) {
                return Err(Error::Internal(format!("B pairs elements {i}, {j} of different parity")));
            }
            let s = if table.parity(i) == 1 { int(-1) } else { int(1) };
            if self.value(j, i) != v * s {
                return Err(Error::Internal(format!("B not supersymmetric at ({i}, {j})")));
            }
        }
        Ok(())
    }

    /// B([x,y],z) − B(x,[y,z]); `None` when a bracket falls outside the band.
    pub fn invariance_defect(&self, table: &StructureTable, x: usize, y: usize, z: usize) -> Option<Rational> {
        let xy = table.bracket(x, y).ok()?;
        let yz = table.bracket(y, z).ok()?;
        let l = self.eval(xy, &[(z, int(1))]);
        let r = self.eval(&[(x, int(1))], yz);
        Some(l - r)
    }

    /// Rows with other than exactly one nonzero entry.
    pub fn degenerate_rows(&self, table: &StructureTable) -> Vec<usize> {
        let mut count = vec![0usize; table.dim()];
        for &(i, _) in self.entries.keys() {
            count[i] += 1;
        }
        (0..table.dim()).filter(|&i| count[i] != 1).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualSide {
    /// B(e, e*) = 1
    Right,
    /// B(e*, e) = 1
    Left,
}

impl DualSide {
    pub fn name(self) -> &'static str {
        match self {
            DualSide::Right => "right",
            DualSide::Left => "left",
        }
    }
}

/// e ↦ (partner id, scale) with the normalization of `side`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualAssignment {
    pub side: DualSide,
    pub duals: Vec<Option<(usize, Rational)>>,
}

impl DualAssignment {
    pub fn get(&self, i: usize) -> Result<&(usize, Rational)> {
        self.duals[i].as_ref().ok_or(Error::MissingDual(i))
    }

    /// Sign pattern of (e*)* against e.
    pub fn double_dual_sign(&self, i: usize) -> Option<Rational> {
        let (j, s) = self.duals[i].as_ref()?;
        let (l, t) = self.duals[*j].as_ref()?;
        (*l == i).then(|| s * t)
    }
}

pub fn duals(table: &StructureTable, form: &InvariantForm, side: DualSide) -> Result<DualAssignment> {
    let mut out = Vec::with_capacity(table.dim());
    for i in 0..table.dim() {
        let d = partner(table, i).and_then(|j| {
            let v = match side {
                DualSide::Right => form.value(i, j),
                DualSide::Left => form.value(j, i),
            };
            (!v.is_zero()).then(|| (j, v.recip()))
        });
        if d.is_none() && table.algebra.band.is_none() {
            return Err(Error::Degenerate(format!(
                "no partner for {} in {}",
                table.basis[i].label(),
                table.algebra
            )));
        }
        out.push(d);
    }
    Ok(DualAssignment { side, duals: out })
}

pub fn right_duals(table: &StructureTable, form: &InvariantForm) -> Result<DualAssignment> {
    duals(table, form, DualSide::Right)
}

pub fn left_duals(table: &StructureTable, form: &InvariantForm) -> Result<DualAssignment> {
    duals(table, form, DualSide::Left)
}

/// The Casimir element assembled term by term from its defining formula.
///
/// po/sh: 2Σ_{α>0} e*_α e_α + Σ_J H_J H*_J + (−2)^{k−1} H_{I∖{k}}, the sum
/// over J skipping ∅ and I for sh.
/// k16: Σ_{α>0} e*_α e_α + Σ_{i≤4} H_i H*_i + 4H₅ + 2H₆ − 4H₈, with α
/// restricted to H₄-weight at most `window`.
pub fn build_casimir(
    table: &StructureTable,
    rs: &RootSystem,
    duals: &DualAssignment,
    window: Option<i64>,
) -> Result<UEAElem<Rational>> {
    let uea = Uea::new(table, rs);
    let family = table.algebra.family;
    let mut c = UEAElem::zero();
    let root_coeff = match family {
        Family::Po | Family::Sh => int(2),
        Family::K16 => int(1),
        _ => return Err(Error::InvalidAlgebra(format!("no Casimir for {}", table.algebra))),
    };
    if family == Family::K16 && window.is_none() {
        return Err(Error::InvalidAlgebra("k16 Casimir needs a grade window".into()));
    }
    for &e in &rs.positive {
        if let (Family::K16, Some(g)) = (family, window) {
            if rs.graded(e).lead > g {
                continue;
            }
        }
        let (f, s) = duals.get(e)?;
        let term = uea.normal_form::<Rational>(&NoCtx, &[*f, e])?;
        c = c.add(&term.scale(&(s * &root_coeff)));
    }
    let cartan_terms: Vec<usize> = match family {
        Family::K16 => (1..=4)
            .map(|i| table.cartan_id(CartanLabel::K16(i)).expect("k16 Cartan"))
            .collect(),
        _ => rs.cartan.clone(),
    };
    for h in cartan_terms {
        let (hd, s) = duals.get(h)?;
        let term = uea.normal_form::<Rational>(&NoCtx, &[h, *hd])?;
        c = c.add(&term.scale(s));
    }
    for (h, coeff) in casimir_linear_part(table) {
        c = c.add(&uea.generator::<Rational>(&NoCtx, h).scale(&coeff));
    }
    Ok(c)
}

/// The linear summand of the Casimir element.
pub fn casimir_linear_part(table: &StructureTable) -> Vec<(usize, Rational)> {
    match table.algebra.family {
        Family::K16 => {
            let h = |i: u8| table.cartan_id(CartanLabel::K16(i)).expect("k16 Cartan");
            vec![(h(5), int(4)), (h(6), int(2)), (h(8), int(-4))]
        }
        _ => {
            let k = table.k();
            let j = ((1u32 << k) - 1) & !(1 << (k - 1));
            table
                .cartan_id(CartanLabel::Subset(j))
                .map(|id| vec![(id, pow_neg2(k as i32 - 1))])
                .unwrap_or_default()
        }
    }
}

/// [C, x] for every basis element x; only nonzero results are kept.
pub fn centrality_check(
    table: &StructureTable,
    rs: &RootSystem,
    c: &UEAElem<Rational>,
) -> Result<Vec<(usize, UEAElem<Rational>)>> {
    let ids: Vec<usize> = (0..table.dim()).collect();
    let results: Vec<Result<Option<(usize, UEAElem<Rational>)>>> = ids
        .par_chunks(8)
        .flat_map_iter(|chunk| {
            let uea = Uea::new(table, rs);
            chunk
                .iter()
                .map(|&x| {
                    let b = uea.bracket(c, &uea.generator(&NoCtx, x))?;
                    Ok((!b.is_zero()).then_some((x, b)))
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        if let Some(f) = r? {
            out.push(f);
        }
    }
    Ok(out)
}

/// Root sum against the weight of the linear Casimir term.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoRhoReport {
    pub root_sum: FullWeight,
    pub element_weight: FullWeight,
}

impl TwoRhoReport {
    pub fn passed(&self) -> bool {
        self.root_sum == self.element_weight
    }
}

pub fn two_rho_check(table: &StructureTable, rs: &RootSystem) -> TwoRhoReport {
    TwoRhoReport {
        root_sum: rs.signed_root_sum(table),
        element_weight: rs.weight_of_element(table, &casimir_linear_part(table)),
    }
}

/// `casimir-check` report.
pub fn casimir_report(
    table: &StructureTable,
    rs: &RootSystem,
    duals: &DualAssignment,
    failures: &[(usize, UEAElem<Rational>)],
) -> Value {
    let uea = Uea::new(table, rs);
    let dual_signs: Vec<Value> = (0..table.dim())
        .filter_map(|i| {
            let (j, s) = duals.duals[i].as_ref()?;
            Some(json!({"basis": i, "dual": j, "scale": fmt_rational(s)}))
        })
        .collect();
    json!({
        "version": 1,
        "family": table.algebra.family,
        "k": table.k(),
        "band": table.algebra.band,
        "convention": {
            "conv_sign": CONV_SIGN,
            "duals": duals.side.name(),
            "dual_signs": dual_signs,
        },
        "failures": failures.iter().map(|(x, b)| json!({
            "basis": table.basis[*x].label(),
            "id": x,
            "bracket": uea.format(b),
        })).collect::<Vec<_>>(),
    })
}

/// Coefficient vector helper for forms on Cartan elements.
pub fn cartan_value<R: Coeff>(ctx: &R::Ctx, a: &[R], h: &[(usize, Rational)], cartan: &[usize]) -> R {
    let mut out = R::constant(ctx, Rational::zero());
    for (id, c) in h {
        if let Some(p) = cartan.iter().position(|x| x == id) {
            out = out.add_ref(&a[p].scale(c));
        }
    }
    out
}
