//! Loop algebras g ⊗ ℚ[t, t⁻¹] with the residue cocycle and the induced form.

use num_traits::Zero;

use super::table::{AlgebraId, BasisElement, Expansion, Kind, StructureTable};
use crate::casimir::bilinear_b;
use crate::exactnum::{int, Rational};
use crate::superpoly::{SPoly, SuperMono};

/// `t^tdeg ⊗ x_base`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LoopElem {
    pub tdeg: i32,
    pub base: usize,
}

/// An element (f, a) of the centrally extended loop algebra.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct LoopVector {
    pub terms: Vec<(LoopElem, Rational)>,
    pub central: Rational,
}

impl LoopVector {
    pub fn elem(e: LoopElem) -> Self {
        LoopVector {
            terms: vec![(e, int(1))],
            central: Rational::zero(),
        }
    }

    pub fn central(a: Rational) -> Self {
        LoopVector {
            terms: Vec::new(),
            central: a,
        }
    }

    fn normalized(mut self) -> Self {
        self.terms.sort_by_key(|(e, _)| *e);
        let mut out: Vec<(LoopElem, Rational)> = Vec::new();
        for (e, c) in self.terms {
            match out.last_mut() {
                Some((last, acc)) if *last == e => *acc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        self.terms = out;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.central.is_zero()
    }

    pub fn add(&self, other: &LoopVector) -> LoopVector {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        LoopVector {
            terms,
            central: &self.central + &other.central,
        }
        .normalized()
    }

    pub fn scale(&self, r: &Rational) -> LoopVector {
        LoopVector {
            terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect(),
            central: &self.central * r,
        }
        .normalized()
    }
}

/// c(t^m⊗x, t^n⊗y) = Res B(f, dg) = n δ_{m+n,0} B(x, y).
pub fn loop_cocycle(base: &StructureTable, x: LoopElem, y: LoopElem) -> Rational {
    if x.tdeg + y.tdeg != 0 {
        return Rational::zero();
    }
    int(y.tdeg as i64) * bilinear_b(base, x.base, y.base)
}

/// B⁽¹⁾((f, a), (g, b)) = B(f, g)(0) + ab.
pub fn affine_form(base: &StructureTable, x: &LoopVector, y: &LoopVector) -> Rational {
    let mut total = &x.central * &y.central;
    for (e, a) in &x.terms {
        for (f, b) in &y.terms {
            if e.tdeg + f.tdeg == 0 {
                total += a * b * bilinear_b(base, e.base, f.base);
            }
        }
    }
    total
}

/// Bracket in the central extension: [f, g] = Σ t^{m+n}[x, y] + c(f, g)·z.
pub fn loop_bracket(base: &StructureTable, x: &LoopVector, y: &LoopVector) -> LoopVector {
    let mut out = LoopVector::default();
    for (e, a) in &x.terms {
        for (f, b) in &y.terms {
            let ab = a * b;
            for (l, c) in base.bracket(e.base, f.base).expect("finite base algebra") {
                out.terms.push((
                    LoopElem {
                        tdeg: e.tdeg + f.tdeg,
                        base: *l,
                    },
                    &ab * c,
                ));
            }
            out.central += &ab * loop_cocycle(base, *e, *f);
        }
    }
    out.normalized()
}

pub(super) fn build_loop(id: AlgebraId, base: &StructureTable) -> StructureTable {
    let band = id.band.expect("loop band");
    let k = id.k;
    let n = base.dim();
    let mut basis = Vec::new();
    for tdeg in -band..=band {
        for b in &base.basis {
            let mono = b.mono.expect("base element has a monomial");
            basis.push(BasisElement {
                id: basis.len(),
                gen: SPoly::t_pow(k, tdeg).smul(&b.gen).expect("same k"),
                mono: Some(SuperMono {
                    tdeg,
                    mask: mono.mask,
                }),
                sign: b.sign,
                parity: b.parity,
                kind: if tdeg == 0 && b.is_cartan() {
                    Kind::Cartan
                } else {
                    Kind::Root
                },
                cartan: if tdeg == 0 { b.cartan } else { None },
                loop_base: Some((tdeg, b.id)),
            });
        }
    }
    let z = basis.len();
    basis.push(BasisElement {
        id: z,
        gen: SPoly::zero(k),
        mono: None,
        sign: 1,
        parity: 0,
        kind: Kind::Central,
        cartan: None,
        loop_base: None,
    });
    let mut table = StructureTable::from_parts(id, basis);
    let id_of = |tdeg: i32, b: usize| ((tdeg + band) as usize) * n + b;
    table.fill(|t, i, j| {
        let (Some((m, a)), Some((p, b))) = (t.basis[i].loop_base, t.basis[j].loop_base) else {
            return Ok(Some(Vec::new()));
        };
        let inner = base.bracket(a, b)?;
        let mut out: Expansion = Vec::new();
        if !inner.is_empty() {
            if (m + p).abs() > band {
                return Ok(None);
            }
            out.extend(inner.iter().map(|(l, c)| (id_of(m + p, *l), c.clone())));
        }
        let c = loop_cocycle(base, LoopElem { tdeg: m, base: a }, LoopElem { tdeg: p, base: b });
        if !c.is_zero() {
            out.push((z, c));
        }
        Ok(Some(out))
    });
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::build_algebra;

    #[test]
    fn cocycle_examples() {
        let base = build_algebra(AlgebraId::po(1)).unwrap();
        let one = base.id_of(SuperMono::new(0, 0)).unwrap();
        let top = base.id_of(SuperMono::new(0, 0b11)).unwrap();
        let b = bilinear_b(&base, one, top);
        assert!(!b.is_zero());
        let f = LoopElem { tdeg: 1, base: one };
        let g = LoopElem { tdeg: -1, base: top };
        assert_eq!(loop_cocycle(&base, f, g), -b.clone());
        assert_eq!(loop_cocycle(&base, g, f), b.clone());
        let f0 = LoopElem { tdeg: 0, base: one };
        let g0 = LoopElem { tdeg: 0, base: top };
        assert!(loop_cocycle(&base, f0, g0).is_zero());
        let lhs = affine_form(
            &base,
            &LoopVector::elem(f0).add(&LoopVector::central(int(1))),
            &LoopVector::elem(g0).add(&LoopVector::central(int(1))),
        );
        assert_eq!(lhs, b + int(1));
    }

    #[test]
    fn loop_table_matches_loop_bracket() {
        let base = build_algebra(AlgebraId::po(1)).unwrap();
        let t = build_algebra(AlgebraId::loop_po(1, 2)).unwrap();
        assert_eq!(t.dim(), 5 * 4 + 1);
        let z = t.central_id().unwrap();
        for i in 0..t.dim() {
            for j in 0..t.dim() {
                if !t.is_complete(i, j) {
                    continue;
                }
                let (Some((m, a)), Some((p, b))) = (t.basis[i].loop_base, t.basis[j].loop_base) else {
                    assert!(t.bracket(i, j).unwrap().is_empty());
                    continue;
                };
                let v = loop_bracket(
                    &base,
                    &LoopVector::elem(LoopElem { tdeg: m, base: a }),
                    &LoopVector::elem(LoopElem { tdeg: p, base: b }),
                );
                let mut expected: Expansion = v
                    .terms
                    .iter()
                    .map(|(e, c)| (((e.tdeg + 2) as usize) * 4 + e.base, c.clone()))
                    .collect();
                if !v.central.is_zero() {
                    expected.push((z, v.central.clone()));
                }
                assert_eq!(t.bracket(i, j).unwrap(), &expected[..]);
            }
        }
        t.check_super_antisymmetry().unwrap();
    }
}
