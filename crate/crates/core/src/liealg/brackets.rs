use crate::exactnum::{int, Rational};
use crate::error::Result;
use crate::superpoly::SPoly;

/// −(−1)^{p(f)} Σ_j (∂f/∂ξ_j ∂g/∂η_j + ∂f/∂η_j ∂g/∂ξ_j), extended to
/// inhomogeneous f by parity parts. `t` is treated as an even parameter.
pub fn poisson_bracket(f: &SPoly, g: &SPoly) -> SPoly {
    let k = f.k();
    let mut out = SPoly::zero(k);
    for (p, part) in f.parity_parts().iter().enumerate() {
        if part.is_zero() {
            continue;
        }
        let mut sum = SPoly::zero(k);
        for j in 1..=k {
            sum = sum
                .add(&part.d_xi(j).smul(&g.d_eta(j)).expect("same k"))
                .add(&part.d_eta(j).smul(&g.d_xi(j)).expect("same k"));
        }
        let sign = if p == 0 { -1 } else { 1 };
        out = out.add(&sum.scale(&int(sign)));
    }
    out
}

/// (2−E)(f) ∂g/∂t − ∂f/∂t (2−E)(g) − {f, g}_{P.b.}
pub fn contact_bracket(f: &SPoly, g: &SPoly) -> SPoly {
    let a = f.two_minus_e().smul(&g.t_partial()).expect("same k");
    let b = f.t_partial().smul(&g.two_minus_e()).expect("same k");
    a.sub(&b).sub(&poisson_bracket(f, g))
}

/// The Hamiltonian field H_f applied to g.
///
/// Its coefficients are those of the Poisson bracket, so H_f(g) = {f, g}_{P.b.}.
pub fn hamiltonian_field(f: &SPoly, g: &SPoly) -> SPoly {
    poisson_bracket(f, g)
}

/// K_f(g) with K_f = (2−E)(f) ∂/∂t − H_f + (∂f/∂t) E.
pub fn apply_field(f: &SPoly, g: &SPoly) -> SPoly {
    let a = f.two_minus_e().smul(&g.t_partial()).expect("same k");
    let c = f.t_partial().smul(&g.euler_e()).expect("same k");
    a.sub(&hamiltonian_field(f, g)).add(&c)
}

/// K_f, H_f ↦ ∫ f vol(θ).
pub fn supertrace(f: &SPoly) -> Result<Rational> {
    f.berezin()
}
