//! Named operators of the twisted calculus, written as expressions.
//!
//! Conventions: `a * b` is composition, brackets are graded, and every
//! degree-dependent scalar is evaluated on the bidegree of the component it
//! is applied to.

use super::expr::{DegreeScalar, FormExpr, OperatorExpr, Prim, TwistMap};
use crate::scalar::GaussRational;

pub fn c(k: i64) -> GaussRational {
    GaussRational::from_int(k)
}

pub fn frac(a: i64, b: i64) -> GaussRational {
    GaussRational::from_frac(a, b)
}

pub fn i() -> GaussRational {
    GaussRational::i()
}

// ---- forms

pub fn eta() -> FormExpr {
    FormExpr::Eta
}

pub fn eta_pow(k: i32) -> FormExpr {
    FormExpr::EtaPow(k)
}

pub fn omega() -> FormExpr {
    FormExpr::Omega
}

pub fn aux(k: usize) -> FormExpr {
    FormExpr::Aux(k)
}

pub fn apply(op: OperatorExpr, f: FormExpr) -> FormExpr {
    FormExpr::Apply(Box::new(op), Box::new(f))
}

pub fn del_of(f: FormExpr) -> FormExpr {
    apply(del(), f)
}

pub fn delbar_of(f: FormExpr) -> FormExpr {
    apply(delbar(), f)
}

pub fn del_eta() -> FormExpr {
    del_of(eta())
}

pub fn delbar_eta() -> FormExpr {
    delbar_of(eta())
}

pub fn ddbar_eta() -> FormExpr {
    del_of(delbar_eta())
}

/// d_η η = η∂η + ∂̄η.
pub fn d_eta_of_eta() -> FormExpr {
    apply(d_eta_plain(), eta())
}

/// d̄_{-η} η = ∂η - η∂̄η.
pub fn dbar_m_eta_of_eta() -> FormExpr {
    apply(dbar_m_eta_plain(), eta())
}

/// (2/η²) i∂η∧∂̄η - (1/η) i∂∂̄η.
pub fn gamma_eta() -> FormExpr {
    c(2) * (eta_pow(-2) * (i() * (del_eta() * delbar_eta()))) - eta_pow(-1) * (i() * ddbar_eta())
}

// ---- primitive operators

pub fn zero() -> OperatorExpr {
    OperatorExpr::Zero
}

pub fn id() -> OperatorExpr {
    OperatorExpr::Identity
}

pub fn del() -> OperatorExpr {
    OperatorExpr::Prim(Prim::Del)
}

pub fn delbar() -> OperatorExpr {
    OperatorExpr::Prim(Prim::Delbar)
}

pub fn d() -> OperatorExpr {
    del() + delbar()
}

pub fn del_star() -> OperatorExpr {
    OperatorExpr::Prim(Prim::DelStar)
}

pub fn delbar_star() -> OperatorExpr {
    OperatorExpr::Prim(Prim::DelbarStar)
}

pub fn lefschetz() -> OperatorExpr {
    OperatorExpr::Prim(Prim::Lefschetz)
}

pub fn lambda() -> OperatorExpr {
    OperatorExpr::Prim(Prim::Lambda)
}

pub fn wedge(f: FormExpr) -> OperatorExpr {
    OperatorExpr::Wedge(f)
}

pub fn wedge_adj(f: FormExpr) -> OperatorExpr {
    OperatorExpr::WedgeAdjoint(f)
}

pub fn scal(c: GaussRational) -> OperatorExpr {
    OperatorExpr::Scalar(c)
}

pub fn deg(s: DegreeScalar) -> OperatorExpr {
    OperatorExpr::Deg(s)
}

pub fn theta(k: i32) -> OperatorExpr {
    OperatorExpr::EtaPow { a: k, b: 0 }
}

pub fn theta_bar() -> OperatorExpr {
    OperatorExpr::EtaPow { a: 0, b: 1 }
}

pub fn br(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr {
    OperatorExpr::bracket(a, b)
}

pub fn conj(a: OperatorExpr) -> OperatorExpr {
    a.conj_of()
}

pub fn adj(a: OperatorExpr) -> OperatorExpr {
    a.adjoint_of()
}

pub fn neg_eta(a: OperatorExpr) -> OperatorExpr {
    a.twisted(TwistMap::Negate)
}

pub fn inv_eta(a: OperatorExpr) -> OperatorExpr {
    a.twisted(TwistMap::Reciprocal)
}

// ---- degree scalars

pub fn dp() -> DegreeScalar {
    DegreeScalar::p()
}

pub fn dq() -> DegreeScalar {
    DegreeScalar::q()
}

pub fn dk() -> DegreeScalar {
    DegreeScalar::k()
}

// ---- untwisted torsion

/// τ = [Λ, ∂ω∧·].
pub fn tau() -> OperatorExpr {
    br(lambda(), wedge(del_of(omega())))
}

pub fn tau_bar() -> OperatorExpr {
    conj(tau())
}

// ---- twisted differentials

/// d_η = η∂ + ∂̄.
pub fn d_eta_plain() -> OperatorExpr {
    wedge(eta()) * del() + delbar()
}

/// d̄_{-η} = ∂ - η∂̄.
pub fn dbar_m_eta_plain() -> OperatorExpr {
    del() - wedge(eta()) * delbar()
}

/// D_η = θ_η d θ_η^{-1}.
pub fn big_d() -> OperatorExpr {
    theta(1) * d() * theta(-1)
}

/// D_η = η∂ + ∂̄ - (p/η) d_η η ∧ ·.
pub fn big_d_explicit() -> OperatorExpr {
    let p_term = (wedge(eta_pow(-1) * d_eta_of_eta()) * deg(dp())).tagged("D_eta.p_term");
    d_eta_plain() - p_term
}

/// D^{1,0}_η = η∂ - p ∂η∧·.
pub fn d10() -> OperatorExpr {
    wedge(eta()) * del() - wedge(del_eta()) * deg(dp())
}

/// D^{0,1}_η = ∂̄ - (p/η) ∂̄η∧·.
pub fn d01() -> OperatorExpr {
    delbar() - wedge(eta_pow(-1) * delbar_eta()) * deg(dp())
}

/// D̄_{-η} = conj of D_{-η}.
pub fn big_dbar_m() -> OperatorExpr {
    conj(neg_eta(big_d()))
}

/// D̄_{-η} = ∂ - η∂̄ - (q/η)∂η∧· + q ∂̄η∧·.
pub fn big_dbar_m_explicit() -> OperatorExpr {
    del() - wedge(eta()) * delbar() - wedge(eta_pow(-1) * del_eta()) * deg(dq()) + wedge(delbar_eta()) * deg(dq())
}

/// conj(D^{0,1}_η) = ∂ - (q/η)∂η∧·.
pub fn c01() -> OperatorExpr {
    conj(d01())
}

pub fn c01_explicit() -> OperatorExpr {
    del() - wedge(eta_pow(-1) * del_eta()) * deg(dq())
}

// ---- twisted torsion

/// τ_η = [Λ, D_η ω ∧ ·].
pub fn tau_eta() -> OperatorExpr {
    br(lambda(), wedge(apply(big_d(), omega())))
}

/// Closed form of τ_η on k-forms.
pub fn tau_eta_closed() -> OperatorExpr {
    let n_k_1 = DegreeScalar::affine(-1, -1, 1, -1);
    let n_k = DegreeScalar::affine(-1, -1, 1, 0);
    wedge(eta()) * tau() + tau_bar() + scal(i()) * wedge(omega()) * wedge_adj(delbar_eta())
        - scal(i()) * wedge(eta_pow(-1)) * wedge_adj(del_eta()) * wedge(omega())
        - wedge(del_eta()) * deg(n_k_1)
        - (wedge(eta_pow(-1) * delbar_eta()) * deg(n_k)).tagged("tau_eta.closed.dbar_eta")
}

pub fn tau_bar_m() -> OperatorExpr {
    conj(neg_eta(tau_eta()))
}

pub fn tau10() -> OperatorExpr {
    br(lambda(), wedge(apply(d10(), omega())))
}

pub fn tau01() -> OperatorExpr {
    br(lambda(), wedge(apply(d01(), omega())))
}

// ---- Laplacians

pub fn laplacian(a: OperatorExpr) -> OperatorExpr {
    br(a.clone(), adj(a))
}

/// Δ_η = [D_η, D_η*].
pub fn delta_eta() -> OperatorExpr {
    laplacian(big_d())
}

/// Δ̄_{-η}.
pub fn delta_bar_m() -> OperatorExpr {
    laplacian(big_dbar_m())
}

/// Δ''_η = [D^{0,1}_η, (D^{0,1}_η)*].
pub fn delta_dd() -> OperatorExpr {
    laplacian(d01())
}

/// Δ'_η = [conj D^{0,1}_η, (conj D^{0,1}_η)*].
pub fn delta_d() -> OperatorExpr {
    laplacian(c01())
}

/// F_η = i[[D^{0,1}_η, conj D^{0,1}_η], Λ].
pub fn curvature_f() -> OperatorExpr {
    scal(i()) * br(br(d01(), c01()), lambda())
}

/// T*_η, assembled per input bidegree.
pub fn t_star() -> OperatorExpr {
    OperatorExpr::by_bidegree("T*_η", -1, |p, _q, n| {
        let dstar = OperatorExpr::Prim(Prim::DelStarTwisted) + OperatorExpr::Prim(Prim::DelbarStarTwisted);
        let form = eta_pow(-1) * del_eta() - eta() * delbar_eta();
        let corr = scal(c(2 * (n as i64 - p as i64))) * br(lambda(), scal(i()) * wedge(form));
        wedge(eta_pow(-2 * p as i32)) * (dstar - corr) * theta(2)
    })
}

/// Δ_{ω_η} = d T*_η + T*_η d.
pub fn delta_omega_eta() -> OperatorExpr {
    d() * t_star() + t_star() * d()
}

/// Twisted product adjoint d*_{ω_η}.
pub fn d_star_twisted() -> OperatorExpr {
    OperatorExpr::Prim(Prim::DelStarTwisted) + OperatorExpr::Prim(Prim::DelbarStarTwisted)
}
