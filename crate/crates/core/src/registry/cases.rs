//! The identity catalogue. Every entry is data: two operator (or form)
//! expressions that must agree, plus what the random instance has to satisfy.
//!
//! Notation in the statements: D = D_η, Dm = conj(D_{-η}) (written D̄_{-η}),
//! D01 = D^{0,1}_η, cD01 = its conjugate, τη = [Λ, Dω∧], X* = formal adjoint,
//! [·,·] graded bracket, p, q, k, n evaluated on the input bidegree unless stated.

use serde::{Deserialize, Serialize};

use super::instance::{MetricKind, TwistKind};
use crate::operators::library::*;
use crate::operators::{DegreeScalar, FormExpr, OperatorExpr};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Section {
    /// Twisting map, D_η, twisted product and adjoints (A).
    Twist,
    /// Commutation relations and the full BKN identities for D_η (B).
    Commutation,
    /// The (1,0)/(0,1) splitting (C).
    Bidegree,
    /// Identities under the special metric γ_η (D).
    Gamma,
    /// Untwisted Hermitian commutation relations (F).
    Standard,
}

impl Section {
    pub fn name(&self) -> &'static str {
        match self {
            Section::Twist => "twist",
            Section::Commutation => "commutation",
            Section::Bidegree => "bidegree",
            Section::Gamma => "gamma",
            Section::Standard => "standard",
        }
    }

    pub fn parse(s: &str) -> Option<Section> {
        Some(match s.to_ascii_lowercase().as_str() {
            "twist" | "a" => Section::Twist,
            "commutation" | "b" => Section::Commutation,
            "bidegree" | "c" => Section::Bidegree,
            "gamma" | "d" => Section::Gamma,
            "standard" | "appendix" | "f" => Section::Standard,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Requires {
    pub metric: MetricKind,
    pub twist: TwistKind,
    /// Number of auxiliary real functions (ρ).
    pub aux: usize,
}

impl Requires {
    fn generic() -> Self {
        Requires { metric: MetricKind::Generic, twist: TwistKind::Generic, aux: 0 }
    }
    fn untwisted() -> Self {
        Requires { metric: MetricKind::Generic, twist: TwistKind::None, aux: 0 }
    }
    fn gamma() -> Self {
        Requires { metric: MetricKind::GammaEta, twist: TwistKind::Generic, aux: 0 }
    }
    pub fn special_metric(&self) -> &'static str {
        if self.metric == MetricKind::GammaEta {
            "gamma_eta"
        } else {
            "none"
        }
    }
}

#[derive(Clone)]
pub enum Check {
    /// lhs(u) = rhs(u) for random u of every applicable bidegree.
    Op { lhs: OperatorExpr, rhs: OperatorExpr },
    /// Equality of two forms built from the instance data.
    Form { lhs: FormExpr, rhs: FormExpr },
}

#[derive(Clone)]
pub struct Part {
    pub label: &'static str,
    pub statement: &'static str,
    pub check: Check,
}

#[derive(Clone)]
pub struct IdentityCase {
    pub id: &'static str,
    pub section: Section,
    pub title: &'static str,
    pub requires: Requires,
    pub parts: Vec<Part>,
    /// Degree bound for random coefficients; the heavy cases use 1.
    pub degree_bound: usize,
}

impl IdentityCase {
    /// Bidegrees the operator parts are checked on.
    pub fn bidegrees(&self, n: usize) -> Vec<(usize, usize)> {
        crate::exterior::random::all_bidegrees(n)
    }

    pub fn n_range(&self) -> std::ops::RangeInclusive<usize> {
        2..=3
    }
}

fn op(label: &'static str, statement: &'static str, lhs: OperatorExpr, rhs: OperatorExpr) -> Part {
    Part { label, statement, check: Check::Op { lhs, rhs } }
}

fn form(label: &'static str, statement: &'static str, lhs: FormExpr, rhs: FormExpr) -> Part {
    Part { label, statement, check: Check::Form { lhs, rhs } }
}

fn case(id: &'static str, section: Section, title: &'static str, requires: Requires, parts: Vec<Part>) -> IdentityCase {
    IdentityCase { id, section, title, requires, parts, degree_bound: 2 }
}

// ---- small builders

fn dn() -> OperatorExpr {
    deg(DegreeScalar::affine(0, 0, 1, 0))
}

fn ii() -> OperatorExpr {
    scal(i())
}

fn w(f: FormExpr) -> OperatorExpr {
    wedge(f)
}

fn inv_eta_w() -> OperatorExpr {
    wedge(eta_pow(-1))
}

/// conj(D_{-η}) applied as a form operator.
fn dm() -> OperatorExpr {
    big_dbar_m()
}

fn sum(v: Vec<OperatorExpr>) -> OperatorExpr {
    v.into_iter().fold(zero(), |a, b| a + b)
}

/// S = (i/2)[Λ,[Λ, Dm D ω∧]] - [Dω∧, (Dω∧)*].
fn s_omega() -> OperatorExpr {
    let dw = apply(big_d(), omega());
    frac(1, 2) * (ii() * br(lambda(), br(lambda(), w(apply(dm(), dw.clone())))))
        - br(w(dw.clone()), wedge_adj(dw))
}

/// T = -(i/2)[Λ,[Λ, D Dm ω∧]] - [Dm ω∧, (Dm ω∧)*].
fn t_omega() -> OperatorExpr {
    let dmw = apply(dm(), omega());
    -(frac(1, 2) * (ii() * br(lambda(), br(lambda(), w(apply(big_d(), dmw.clone()))))))
        - br(w(dmw.clone()), wedge_adj(dmw))
}

fn s_omega_dd() -> OperatorExpr {
    let dw = apply(d01(), omega());
    frac(1, 2) * (ii() * br(lambda(), br(lambda(), w(apply(c01(), dw.clone())))))
        - br(w(dw.clone()), wedge_adj(dw))
}

fn t_omega_dd() -> OperatorExpr {
    let cw = apply(c01(), omega());
    -(frac(1, 2) * (ii() * br(lambda(), br(lambda(), w(apply(d01(), cw.clone()))))))
        - br(w(cw.clone()), wedge_adj(cw))
}

/// Untwisted T_ω = [Λ,[Λ,(i/2)∂∂̄ω]] - [∂ω∧, (∂ω∧)*].
fn t_plain() -> OperatorExpr {
    let ddw = frac(1, 2) * (i() * del_of(delbar_of(omega())));
    br(lambda(), br(lambda(), w(ddw))) - br(w(del_of(omega())), wedge_adj(del_of(omega())))
}

fn d_eta_eta() -> FormExpr {
    d_eta_of_eta()
}

fn dm_eta() -> FormExpr {
    dbar_m_eta_of_eta()
}

/// The first-order part A of the curvature operator.
fn curvature_first_order() -> OperatorExpr {
    let a = br(lambda(), ii() * w(delbar_eta())) * del();
    let b = br(lambda(), ii() * w(del_eta())) * delbar();
    let c = ii() * w(delbar_eta()) * br(lambda(), del());
    let d = ii() * w(del_eta()) * br(lambda(), delbar());
    inv_eta_w() * (a + b + c + d)
}

fn twist_cases() -> Vec<IdentityCase> {
    let g = Requires::generic();
    vec![
        case(
            "A1",
            Section::Twist,
            "inverse of the twisting map",
            g,
            vec![op("main", "θ_η θ_{1/η} = Id", theta(1) * inv_eta(theta(1)), id())],
        ),
        case(
            "A2",
            Section::Twist,
            "conjugate twisting map",
            g,
            vec![op(
                "main",
                "conj(θ_η) u = η^q u on (p,q)-forms",
                conj(theta(1)),
                OperatorExpr::by_bidegree("η^q", 0, |_p, q, _n| wedge(eta_pow(q as i32))),
            )],
        ),
        case(
            "A3",
            Section::Twist,
            "explicit form of D_η",
            g,
            vec![op("main", "θ d θ^{-1} = d_η - (p/η) d_η η∧", big_d(), big_d_explicit())],
        ),
        case("A4", Section::Twist, "D_η squares to zero", g, vec![op("main", "D D = 0", big_d() * big_d(), zero())]),
        case(
            "A5",
            Section::Twist,
            "conjugate of D_{-η} by bidegree",
            g,
            vec![op("main", "Dm = ∂ - η∂̄ - (q/η)∂η∧ + q ∂̄η∧", big_dbar_m(), big_dbar_m_explicit())],
        ),
        case(
            "A6",
            Section::Twist,
            "adjoints against a real function",
            Requires { aux: 1, ..g },
            vec![
                op(
                    "del",
                    "∂*(ρ·) = ρ∂* + [Λ, i∂̄ρ∧]",
                    del_star() * w(aux(0)),
                    w(aux(0)) * del_star() + br(lambda(), ii() * w(delbar_of(aux(0)))),
                ),
                op(
                    "delbar",
                    "∂̄*(ρ·) = ρ∂̄* - [Λ, i∂ρ∧]",
                    delbar_star() * w(aux(0)),
                    w(aux(0)) * delbar_star() - br(lambda(), ii() * w(del_of(aux(0)))),
                ),
            ],
        ),
        case(
            "A7",
            Section::Twist,
            "adjoints for the twisted product",
            g,
            vec![
                op(
                    "del",
                    "∂*_{ω_η} = η²∂* - 2(n-p)η[Λ, i∂̄η∧] on (p,q)",
                    OperatorExpr::Prim(crate::operators::Prim::DelStarTwisted),
                    OperatorExpr::by_bidegree("∂*_{ω_η}", -1, |p, _q, n| {
                        w(eta_pow(2)) * del_star()
                            - c(2 * (n as i64 - p as i64)) * (w(eta()) * br(lambda(), ii() * w(delbar_eta())))
                    }),
                ),
                op(
                    "delbar",
                    "∂̄*_{ω_η} = ∂̄* + (2(n-p)/η)[Λ, i∂η∧] on (p,q)",
                    OperatorExpr::Prim(crate::operators::Prim::DelbarStarTwisted),
                    OperatorExpr::by_bidegree("∂̄*_{ω_η}", -1, |p, _q, n| {
                        delbar_star() + c(2 * (n as i64 - p as i64)) * (inv_eta_w() * br(lambda(), ii() * w(del_eta())))
                    }),
                ),
            ],
        ),
        case(
            "A8",
            Section::Twist,
            "adjoint of D_η through the twisted product",
            g,
            vec![op("main", "D* = θ T*_η θ^{-1}", adj(big_d()), theta(1) * t_star() * theta(-1))],
        ),
        case(
            "A9",
            Section::Twist,
            "conjugation of Laplacians",
            g,
            vec![op("main", "Δ_η = θ Δ_{ω_η} θ^{-1}", delta_eta(), theta(1) * delta_omega_eta() * theta(-1))],
        ),
    ]
}

fn commutation_cases() -> Vec<IdentityCase> {
    let g = Requires::generic();
    let d = big_d;
    let t = tau_eta;
    let tm = tau_bar_m;
    let n_over_eta = || dn() * inv_eta_w();
    let mut heavy = vec![
        case(
            "B5",
            Section::Commutation,
            "rough BKN identity for D_η",
            g,
            vec![op(
                "main",
                "Δ_η = Δ̄_{-η} + i[[D,Dm],Λ] + [Dm, τm*] - [D, τη*] + n[D,(1/η)[i dm η∧,Λ]] + n[Dm,(1/η)[i dη η∧,Λ]]",
                delta_eta(),
                sum(vec![
                    delta_bar_m(),
                    ii() * br(br(d(), dm()), lambda()),
                    br(dm(), adj(tm())),
                    -br(d(), adj(t())),
                    dn() * br(d(), inv_eta_w() * br(ii() * w(dm_eta()), lambda())),
                    dn() * br(dm(), inv_eta_w() * br(ii() * w(d_eta_eta()), lambda())),
                ]),
            )],
        ),
        case(
            "B6",
            Section::Commutation,
            "preliminary relations for the refined identity",
            g,
            vec![
                op("i", "[L, τη] = 3 Dω∧", br(lefschetz(), t()), c(3) * w(apply(d(), omega()))),
                op("ii", "[Λ, τη] = 2i τm*", br(lambda(), t()), c(2) * (ii() * adj(tm()))),
                op(
                    "iii",
                    "[D, Dm*] = -[D, τm*] - [D, (n/η)(dm η∧)*]",
                    br(d(), adj(dm())),
                    -br(d(), adj(tm())) - br(d(), n_over_eta() * wedge_adj(dm_eta())),
                ),
                op(
                    "iv",
                    "[D,D*] + [D,τη*] - [Dm,τm*] = [D+τη, D*+τη*] + S + (n/η)[τη, (dη η∧)*]",
                    br(d(), adj(d())) + br(d(), adj(t())) - br(dm(), adj(tm())),
                    br(d() + t(), adj(d()) + adj(t())) + s_omega() + br(t(), n_over_eta() * wedge_adj(d_eta_eta())),
                ),
            ],
        ),
        case(
            "B7",
            Section::Commutation,
            "refined BKN identity for D_η",
            g,
            vec![
                op(
                    "main",
                    "Δ_η = [Dm+τm, Dm*+τm*] + T + i[[D,Dm],Λ] + n[Dm+τm,(1/η)(dm η∧)*] - n[D,(1/η)(dη η∧)*]",
                    delta_eta(),
                    sum(vec![
                        br(dm() + tm(), adj(dm()) + adj(tm())),
                        t_omega(),
                        ii() * br(br(d(), dm()), lambda()),
                        dn() * br(dm() + tm(), inv_eta_w() * wedge_adj(dm_eta())),
                        -(dn() * br(d(), inv_eta_w() * wedge_adj(d_eta_eta()))),
                    ]),
                ),
                op("t_consistency", "T = conj(S with η replaced by -η)", conj(neg_eta(s_omega())), t_omega()),
            ],
        ),
    ];
    for h in heavy.iter_mut() {
        h.degree_bound = 1;
    }
    let mut v = vec![
        case(
            "B1",
            Section::Commutation,
            "expansion of the adjoint of D_η",
            g,
            vec![op(
                "main",
                "D* v = ∂*(ηv) + ∂̄*v - p (∂η∧)* v - (p/η)(∂̄η∧)* v, p read on the output",
                adj(d()),
                del_star() * w(eta()) + delbar_star()
                    - deg(dp()) * wedge_adj(del_eta())
                    - deg(dp()) * wedge_adj(eta_pow(-1) * delbar_eta()),
            )],
        ),
        case(
            "B2",
            Section::Commutation,
            "preliminary twisted commutation relation",
            g,
            vec![op(
                "main",
                "D* + (ητ + τ̄)* = -i[Λ,Dm] - (k/η)[Λ, i dm η∧] - (i/η) dm η∧Λ, k the input degree",
                adj(d()) + adj(w(eta()) * tau() + tau_bar()),
                -(ii() * br(lambda(), dm()))
                    - inv_eta_w() * br(lambda(), ii() * w(dm_eta())) * deg(dk())
                    - ii() * w(eta_pow(-1) * dm_eta()) * lambda(),
            )],
        ),
        case(
            "B3",
            Section::Commutation,
            "closed form of τ_η",
            g,
            vec![op(
                "main",
                "τη = ητ + τ̄ + iω∧(∂̄η∧)* - (i/η)(∂η∧)*(ω∧) - (n-k-1)∂η∧ - ((n-k)/η)∂̄η∧",
                tau_eta(),
                tau_eta_closed(),
            )],
        ),
        case(
            "B4",
            Section::Commutation,
            "twisted commutation relations",
            g,
            vec![
                op(
                    "a",
                    "D* + τη* = -i[Λ,Dm] + (n/η)[i dm η∧, Λ]",
                    adj(d()) + adj(t()),
                    -(ii() * br(lambda(), dm())) + n_over_eta() * br(ii() * w(dm_eta()), lambda()),
                ),
                op(
                    "b",
                    "Dm* + τm* = i[Λ,D] - (n/η)[i dη η∧, Λ]",
                    adj(dm()) + adj(tm()),
                    ii() * br(lambda(), d()) - n_over_eta() * br(ii() * w(d_eta_eta()), lambda()),
                ),
                op(
                    "c",
                    "D + τη = i[Dm*, L] - (n/η)[L, i(dm η∧)*]",
                    d() + t(),
                    ii() * br(adj(dm()), lefschetz()) - n_over_eta() * br(lefschetz(), ii() * wedge_adj(dm_eta())),
                ),
                op(
                    "d",
                    "Dm + τm = -i[D*, L] + (n/η)[L, i(dη η∧)*]",
                    dm() + tm(),
                    -(ii() * br(adj(d()), lefschetz())) + n_over_eta() * br(lefschetz(), ii() * wedge_adj(d_eta_eta())),
                ),
            ],
        ),
    ];
    v.append(&mut heavy);
    v.push(case(
        "B8",
        Section::Commutation,
        "curvature operator of D_η",
        g,
        vec![
            op(
                "bracket",
                "[D,Dm] = (η-1/η)∂̄η∧∂ - (η+1/η)∂η∧∂̄ + 2(p-q)/η² ∂η∧∂̄η∧ + (q-p)(η+1/η)∂∂̄η∧",
                br(d(), dm()),
                OperatorExpr::by_bidegree("[D,Dm]", 2, |p, q, _n| {
                    let pm = p as i64 - q as i64;
                    let e_minus = eta() - eta_pow(-1);
                    let e_plus = eta() + eta_pow(-1);
                    w(e_minus.clone() * delbar_eta()) * del() - w(e_plus.clone() * del_eta()) * delbar()
                        + c(2 * pm) * w(eta_pow(-2) * (del_eta() * delbar_eta()))
                        + c(-pm) * w(e_plus * ddbar_eta())
                }),
            ),
            op(
                "with_lambda",
                "i[[D,Dm],Λ] in terms of [i∂̄η∧,Λ], [∂,Λ], [i∂η∧,Λ], [∂̄,Λ]",
                ii() * br(br(d(), dm()), lambda()),
                OperatorExpr::by_bidegree("i[[D,Dm],Λ]", 0, |p, q, _n| {
                    let pm = p as i64 - q as i64;
                    let e_minus = w(eta() - eta_pow(-1));
                    let e_plus = w(eta() + eta_pow(-1));
                    let a = br(ii() * w(delbar_eta()), lambda()) * del() + ii() * w(delbar_eta()) * br(del(), lambda());
                    let b = br(ii() * w(del_eta()), lambda()) * delbar() + ii() * w(del_eta()) * br(delbar(), lambda());
                    e_minus * a - e_plus.clone() * b
                        + c(2 * pm) * (w(eta_pow(-2)) * br(ii() * w(del_eta() * delbar_eta()), lambda()))
                        + c(-pm) * (e_plus * br(ii() * w(ddbar_eta()), lambda()))
                }),
            ),
        ],
    ));
    // The stated coefficient of ∂̄η∧∂ in B8 does not survive a direct
    // computation: expanding Dm(η∂u) gives -η∂̄η∧∂u, so the two first-order
    // terms share the coefficient -(η+1/η). B10 carries the recomputed form.
    v.push(case(
        "B10",
        Section::Commutation,
        "curvature operator of D_η, recomputed first-order coefficient",
        g,
        vec![
            op(
                "bracket",
                "[D,Dm] = -(η+1/η)(∂̄η∧∂ + ∂η∧∂̄) + 2(p-q)/η² ∂η∧∂̄η∧ + (q-p)(η+1/η)∂∂̄η∧",
                br(d(), dm()),
                OperatorExpr::by_bidegree("[D,Dm]'", 2, |p, q, _n| {
                    let pm = p as i64 - q as i64;
                    let e_plus = eta() + eta_pow(-1);
                    -(w(e_plus.clone() * delbar_eta()) * del() + w(e_plus.clone() * del_eta()) * delbar())
                        + c(2 * pm) * w(eta_pow(-2) * (del_eta() * delbar_eta()))
                        + c(-pm) * w(e_plus * ddbar_eta())
                }),
            ),
            op(
                "with_lambda",
                "i[[D,Dm],Λ] with the recomputed coefficient",
                ii() * br(br(d(), dm()), lambda()),
                OperatorExpr::by_bidegree("i[[D,Dm],Λ]'", 0, |p, q, _n| {
                    let pm = p as i64 - q as i64;
                    let e_plus = w(eta() + eta_pow(-1));
                    let a = br(ii() * w(delbar_eta()), lambda()) * del() + ii() * w(delbar_eta()) * br(del(), lambda());
                    let b = br(ii() * w(del_eta()), lambda()) * delbar() + ii() * w(del_eta()) * br(delbar(), lambda());
                    -(e_plus.clone() * (a + b))
                        + c(2 * pm) * (w(eta_pow(-2)) * br(ii() * w(del_eta() * delbar_eta()), lambda()))
                        + c(-pm) * (e_plus * br(ii() * w(ddbar_eta()), lambda()))
                }),
            ),
        ],
    ));
    v.push(case(
        "B9",
        Section::Commutation,
        "auxiliary brackets with Dω",
        g,
        vec![
            op(
                "dw_dm",
                "[Dω∧, Dm] = Dm Dω∧",
                br(w(apply(d(), omega())), dm()),
                w(apply(dm(), apply(d(), omega()))),
            ),
            op("l_d", "[L, D] = -Dω∧", br(lefschetz(), d()), -w(apply(d(), omega()))),
            op("dm_l", "[Dm, L] = Dm ω∧", br(dm(), lefschetz()), w(apply(dm(), omega()))),
        ],
    ));
    v
}

fn bidegree_cases() -> Vec<IdentityCase> {
    let g = Requires::generic();
    let cdm = || conj(neg_eta(d10()));
    let ctm = || conj(neg_eta(tau10()));
    let cdm01 = || conj(neg_eta(d01()));
    let ctm01 = || conj(neg_eta(tau01()));
    let n_over_eta = || dn() * inv_eta_w();
    // conj(d'_{-η})η = -η∂̄η, conj(d''_{-η})η = ∂η, d'_η η = η∂η, d''_η η = ∂̄η
    let cdp = || -(eta() * delbar_eta());
    let cdpp = del_eta;
    let dp_ = || eta() * del_eta();
    let dpp = delbar_eta;
    let tw = |f: FormExpr| w(eta_pow(-1) * f * omega());
    let mut v = vec![
        case(
            "C1",
            Section::Bidegree,
            "torsion and D^{0,1} in terms of the untwisted torsion",
            g,
            vec![
                op("tau", "τ = conj(τ01) + [Λ, (1/η)∂η∧ω∧]", tau(), conj(tau01()) + br(lambda(), tw(del_eta()))),
                op("tau_bar", "τ̄ = τ01 + [Λ, (1/η)∂̄η∧ω∧]", tau_bar(), tau01() + br(lambda(), tw(delbar_eta()))),
                op(
                    "d01",
                    "D01 + τ01 = ∂̄ + τ̄ - (p/η)∂̄η∧ - [Λ, (1/η)∂̄η∧ω∧]",
                    d01() + tau01(),
                    delbar() + tau_bar()
                        - w(eta_pow(-1) * delbar_eta()) * deg(dp())
                        - br(lambda(), tw(delbar_eta())),
                ),
                op(
                    "c01",
                    "cD01 + conj(τ01) = ∂ + τ - (q/η)∂η∧ - [Λ, (1/η)∂η∧ω∧]",
                    c01() + conj(tau01()),
                    del() + tau() - w(eta_pow(-1) * del_eta()) * deg(dq()) - br(lambda(), tw(del_eta())),
                ),
                op(
                    "tau10",
                    "τ10 = ητ - [Λ, ∂η∧ω∧]",
                    tau10(),
                    w(eta()) * tau() - br(lambda(), w(del_eta() * omega())),
                ),
            ],
        ),
        case(
            "C2",
            Section::Bidegree,
            "integrability of the split operators",
            g,
            vec![
                op("d10_sq", "D10 D10 = 0", d10() * d10(), zero()),
                op("anti", "D10 D01 + D01 D10 = 0", br(d10(), d01()), zero()),
                op("d01_sq", "D01 D01 = 0", d01() * d01(), zero()),
            ],
        ),
        case(
            "C3",
            Section::Bidegree,
            "conjugate of D^{0,1} and its adjoint",
            g,
            vec![
                op("conj", "cD01 = ∂ - (q/η)∂η∧", c01(), c01_explicit()),
                op(
                    "adjoint",
                    "cD01* = ∂* - (q/η)(∂η∧)*",
                    adj(c01()),
                    del_star() - deg(dq()) * wedge_adj(eta_pow(-1) * del_eta()),
                ),
            ],
        ),
        case(
            "C4",
            Section::Bidegree,
            "adjoint sum for the conjugate operators",
            g,
            vec![op(
                "main",
                "cD01* + conj(τ01)* = ∂* + τ* - (q/η)(∂η∧)* - [((1/η)∂η∧ω∧)*, L]",
                adj(c01()) + adj(conj(tau01())),
                del_star() + adj(tau())
                    - deg(dq()) * wedge_adj(eta_pow(-1) * del_eta())
                    - br(wedge_adj(eta_pow(-1) * del_eta() * omega()), lefschetz()),
            )],
        ),
        case(
            "C5",
            Section::Bidegree,
            "split operators as conjugates",
            g,
            vec![
                op("d10", "D10 = θ∂θ^{-1}", d10(), theta(1) * del() * theta(-1)),
                op("d01", "D01 = θ∂̄θ^{-1}", d01(), theta(1) * delbar() * theta(-1)),
            ],
        ),
        case(
            "C6",
            Section::Bidegree,
            "parity in η",
            g,
            vec![
                op("d01", "D01 with η replaced by -η is unchanged", neg_eta(d01()), d01()),
                op("tau01", "τ01 with η replaced by -η is unchanged", neg_eta(tau01()), tau01()),
            ],
        ),
        case(
            "C7",
            Section::Bidegree,
            "split twisted commutation relations",
            g,
            vec![
                op(
                    "a1",
                    "D10* + τ10* = -i[Λ, conj D10_{-η}] + (n/η)[i conj(d'_{-η})η∧, Λ]",
                    adj(d10()) + adj(tau10()),
                    -(ii() * br(lambda(), cdm())) + n_over_eta() * br(ii() * w(cdp()), lambda()),
                ),
                op(
                    "a2",
                    "D01* + τ01* = -i[Λ, conj D01_{-η}] + (n/η)[i conj(d''_{-η})η∧, Λ]",
                    adj(d01()) + adj(tau01()),
                    -(ii() * br(lambda(), cdm01())) + n_over_eta() * br(ii() * w(cdpp()), lambda()),
                ),
                op(
                    "b1",
                    "(conj D10_{-η})* + (conj τ10_{-η})* = i[Λ, D10] - (n/η)[i d'_η η∧, Λ]",
                    adj(cdm()) + adj(ctm()),
                    ii() * br(lambda(), d10()) - n_over_eta() * br(ii() * w(dp_()), lambda()),
                ),
                op(
                    "b2",
                    "(conj D01_{-η})* + (conj τ01_{-η})* = i[Λ, D01] - (n/η)[i d''_η η∧, Λ]",
                    adj(cdm01()) + adj(ctm01()),
                    ii() * br(lambda(), d01()) - n_over_eta() * br(ii() * w(dpp()), lambda()),
                ),
                op(
                    "c1",
                    "D10 + τ10 = i[(conj D10_{-η})*, L] - (n/η)[L, i(conj(d'_{-η})η∧)*]",
                    d10() + tau10(),
                    ii() * br(adj(cdm()), lefschetz()) - n_over_eta() * br(lefschetz(), ii() * wedge_adj(cdp())),
                ),
                op(
                    "c2",
                    "D01 + τ01 = i[(conj D01_{-η})*, L] - (n/η)[L, i(conj(d''_{-η})η∧)*]",
                    d01() + tau01(),
                    ii() * br(adj(cdm01()), lefschetz()) - n_over_eta() * br(lefschetz(), ii() * wedge_adj(cdpp())),
                ),
                op(
                    "d1",
                    "conj D10_{-η} + conj τ10_{-η} = -i[D10*, L] + (n/η)[L, i(d'_η η∧)*]",
                    cdm() + ctm(),
                    -(ii() * br(adj(d10()), lefschetz())) + n_over_eta() * br(lefschetz(), ii() * wedge_adj(dp_())),
                ),
                op(
                    "d2",
                    "conj D01_{-η} + conj τ01_{-η} = -i[D01*, L] + (n/η)[L, i(d''_η η∧)*]",
                    cdm01() + ctm01(),
                    -(ii() * br(adj(d01()), lefschetz())) + n_over_eta() * br(lefschetz(), ii() * wedge_adj(dpp())),
                ),
            ],
        ),
    ];
    let mut heavy = vec![
        case(
            "C8",
            Section::Bidegree,
            "rough BKN identity for D^{0,1}",
            g,
            vec![op(
                "main",
                "Δ'' = Δ' + i[[D01,cD01],Λ] + [cD01, conj(τ01)*] - [D01, τ01*] + n[D01,(i/η)[∂η∧,Λ]] + n[cD01,(i/η)[∂̄η∧,Λ]]",
                delta_dd(),
                sum(vec![
                    delta_d(),
                    curvature_f(),
                    br(c01(), adj(conj(tau01()))),
                    -br(d01(), adj(tau01())),
                    dn() * br(d01(), ii() * inv_eta_w() * br(w(del_eta()), lambda())),
                    dn() * br(c01(), ii() * inv_eta_w() * br(w(delbar_eta()), lambda())),
                ]),
            )],
        ),
        case(
            "C9",
            Section::Bidegree,
            "preliminary relations for the refined split identity",
            g,
            vec![
                op("i", "[L, τ01] = 3 D01ω∧", br(lefschetz(), tau01()), c(3) * w(apply(d01(), omega()))),
                op("ii", "[Λ, τ01] = 2i (conj τ01_{-η})*", br(lambda(), tau01()), c(2) * (ii() * adj(ctm01()))),
                op(
                    "iii",
                    "[D01, (conj D01_{-η})*] = -[D01, (conj τ01_{-η})*] - [D01, (n/η)(∂η∧)*]",
                    br(d01(), adj(cdm01())),
                    -br(d01(), adj(ctm01())) - br(d01(), n_over_eta() * wedge_adj(del_eta())),
                ),
                op(
                    "iv",
                    "[D01,D01*] + [D01,τ01*] - [cD01_{-η}, cτ01_{-η}*] = [D01+τ01, D01*+τ01*] + S'' + (n/η)[τ01, (∂̄η∧)*]",
                    br(d01(), adj(d01())) + br(d01(), adj(tau01())) - br(cdm01(), adj(ctm01())),
                    br(d01() + tau01(), adj(d01()) + adj(tau01()))
                        + s_omega_dd()
                        + br(tau01(), n_over_eta() * wedge_adj(delbar_eta())),
                ),
            ],
        ),
        case(
            "C10",
            Section::Bidegree,
            "refined BKN identity for D^{0,1}",
            g,
            vec![
                op(
                    "main",
                    "Δ'' = [cD01+cτ01, cD01*+cτ01*] + T'' + F + n[cD01+cτ01,(1/η)(∂η∧)*] - n[D01,(1/η)(∂̄η∧)*]",
                    delta_dd(),
                    sum(vec![
                        br(c01() + conj(tau01()), adj(c01()) + adj(conj(tau01()))),
                        t_omega_dd(),
                        curvature_f(),
                        dn() * br(c01() + conj(tau01()), inv_eta_w() * wedge_adj(del_eta())),
                        -(dn() * br(d01(), inv_eta_w() * wedge_adj(delbar_eta()))),
                    ]),
                ),
                op("t_consistency", "T'' = conj(S'' with η replaced by -η)", conj(neg_eta(s_omega_dd())), t_omega_dd()),
            ],
        ),
    ];
    for h in heavy.iter_mut() {
        h.degree_bound = 1;
    }
    v.append(&mut heavy);
    v.push(case(
        "C11",
        Section::Bidegree,
        "curvature operator of D^{0,1}",
        g,
        vec![
            op(
                "bracket",
                "i[D01,cD01] = -(1/η)(i∂̄η∧∂ + i∂η∧∂̄) + ((p-q)/η)((2/η)i∂η∧∂̄η - i∂∂̄η)∧",
                ii() * br(d01(), c01()),
                OperatorExpr::by_bidegree("i[D01,cD01]", 2, |p, q, _n| {
                    let pm = p as i64 - q as i64;
                    -(inv_eta_w() * (ii() * w(delbar_eta()) * del() + ii() * w(del_eta()) * delbar()))
                        + c(pm) * (inv_eta_w() * w(c(2) * (i() * (eta_pow(-1) * (del_eta() * delbar_eta()))) - i() * ddbar_eta()))
                }),
            ),
            op(
                "with_lambda",
                "F = A + (p-q)[γ_η∧, Λ], A the first-order part",
                curvature_f(),
                OperatorExpr::by_bidegree("F", 0, |p, q, _n| {
                    curvature_first_order() + c(p as i64 - q as i64) * br(w(gamma_eta()), lambda())
                }),
            ),
            form(
                "hessian_theta",
                "D01 cD01 ω = η² ∂̄((1/η)∂((1/η)ω))",
                apply(d01(), apply(c01(), omega())),
                eta_pow(2) * delbar_of(eta_pow(-1) * del_of(eta_pow(-1) * omega())),
            ),
            form(
                "hessian_explicit",
                "D01 cD01 ω = -∂∂̄ω - (1/η)(2∂̄η∧∂ω - ∂η∧∂̄ω) + (1/η)(∂∂̄η - (3/η)∂η∧∂̄η)∧ω",
                apply(d01(), apply(c01(), omega())),
                -del_of(delbar_of(omega()))
                    - eta_pow(-1) * (c(2) * (delbar_eta() * del_of(omega())) - del_eta() * delbar_of(omega()))
                    + eta_pow(-1) * ((ddbar_eta() - c(3) * (eta_pow(-1) * (del_eta() * delbar_eta()))) * omega()),
            ),
        ],
    ));
    // ∂φ := -∂η/η, ∂̄φ := -∂̄η/η, ∂∂̄φ := ∂(∂̄φ)
    let dphi = || -(eta_pow(-1) * del_eta());
    let dbphi = || -(eta_pow(-1) * delbar_eta());
    let ddbphi = || del_of(dbphi());
    v.push(case(
        "C12",
        Section::Bidegree,
        "substitution η = exp(-φ)",
        g,
        vec![
            form("del", "(1/η) i∂η = -i∂φ", i() * (eta_pow(-1) * del_eta()), -(i() * dphi())),
            form("delbar", "(1/η) i∂̄η = -i∂̄φ", i() * (eta_pow(-1) * delbar_eta()), -(i() * dbphi())),
            form(
                "hessian",
                "(1/η) i∂∂̄η = i∂φ∧∂̄φ - i∂∂̄φ",
                i() * (eta_pow(-1) * ddbar_eta()),
                i() * (dphi() * dbphi()) - i() * ddbphi(),
            ),
            form("gamma", "γ_η = i∂φ∧∂̄φ + i∂∂̄φ", gamma_eta(), i() * (dphi() * dbphi()) + i() * ddbphi()),
        ],
    ));
    v
}

fn gamma_cases() -> Vec<IdentityCase> {
    let mut v = vec![case(
        "D1",
        Section::Gamma,
        "closedness properties of γ_η",
        Requires::generic(),
        vec![
            form("conj_d01", "cD01 γ_η = 0", apply(c01(), gamma_eta()), FormExpr::Sum(vec![])),
            form("closed", "d(γ_η/η) = 0", apply(d(), eta_pow(-1) * gamma_eta()), FormExpr::Sum(vec![])),
        ],
    )];
    let mut heavy = vec![
        case(
            "D2",
            Section::Gamma,
            "torsion under ω = γ_η",
            Requires::gamma(),
            vec![
                op("tau", "τ = [Λ, (1/η)∂η∧ω∧]", tau(), br(lambda(), w(eta_pow(-1) * del_eta() * omega()))),
                op("tau01", "τ01 = 0", tau01(), zero()),
                op("t_dd", "T'' = 0", t_omega_dd(), zero()),
            ],
        ),
        case(
            "D3",
            Section::Gamma,
            "simplified BKN identity and curvature split under ω = γ_η",
            Requires::gamma(),
            vec![
                op(
                    "bkn",
                    "Δ'' = Δ' + F + n[cD01+cτ01,(1/η)(∂η∧)*] - n[D01,(1/η)(∂̄η∧)*]",
                    delta_dd(),
                    sum(vec![
                        delta_d(),
                        curvature_f(),
                        dn() * br(c01() + conj(tau01()), inv_eta_w() * wedge_adj(del_eta())),
                        -(dn() * br(d01(), inv_eta_w() * wedge_adj(delbar_eta()))),
                    ]),
                ),
                op(
                    "curvature",
                    "F = A + (p-q)(p+q-n) Id",
                    curvature_f(),
                    curvature_first_order()
                        + deg(DegreeScalar::affine(1, -1, 0, 0).times(DegreeScalar::affine(1, 1, -1, 0))),
                ),
            ],
        ),
    ];
    for h in heavy.iter_mut() {
        h.degree_bound = 1;
    }
    v.append(&mut heavy);
    v
}

fn standard_cases() -> Vec<IdentityCase> {
    let u = Requires::untwisted();
    let g = Requires::generic();
    vec![
        case(
            "F1",
            Section::Standard,
            "Hermitian commutation relations",
            u,
            vec![
                op("i", "(∂+τ)* = i[Λ,∂̄]", adj(del() + tau()), ii() * br(lambda(), delbar())),
                op("ii", "(∂̄+τ̄)* = -i[Λ,∂]", adj(delbar() + tau_bar()), -(ii() * br(lambda(), del()))),
                op("iii", "∂+τ = -i[∂̄*, L]", del() + tau(), -(ii() * br(delbar_star(), lefschetz()))),
                op("iv", "∂̄+τ̄ = i[∂*, L]", delbar() + tau_bar(), ii() * br(del_star(), lefschetz())),
            ],
        ),
        case(
            "F2",
            Section::Standard,
            "rough Hermitian BKN identity",
            u,
            vec![op(
                "main",
                "Δ'' = Δ' + [∂,τ*] - [∂̄,τ̄*]",
                laplacian(delbar()),
                laplacian(del()) + br(del(), adj(tau())) - br(delbar(), adj(tau_bar())),
            )],
        ),
        case(
            "F3",
            Section::Standard,
            "refined Hermitian BKN identity",
            u,
            vec![op("main", "Δ'' = [∂+τ, (∂+τ)*] + T_ω", laplacian(delbar()), laplacian(del() + tau()) + t_plain())],
        ),
        case(
            "F4",
            Section::Standard,
            "auxiliary torsion relations",
            u,
            vec![
                op("i", "[L,τ] = 3∂ω∧", br(lefschetz(), tau()), c(3) * w(del_of(omega()))),
                op("ii", "[Λ,τ] = -2i τ̄*", br(lambda(), tau()), -(c(2) * (ii() * adj(tau_bar())))),
                op("iii_a", "[∂, τ̄*] = -[∂, ∂̄*]", br(del(), adj(tau_bar())), -br(del(), delbar_star())),
                op("iii_b", "-[∂, ∂̄*] = [τ, ∂̄*]", -br(del(), delbar_star()), br(tau(), delbar_star())),
                op(
                    "iv",
                    "-[∂̄, τ̄*] = [τ, (∂+τ)*] + T_ω",
                    -br(delbar(), adj(tau_bar())),
                    br(tau(), adj(del() + tau())) + t_plain(),
                ),
            ],
        ),
        case(
            "F5",
            Section::Standard,
            "anticommutation pair",
            u,
            vec![
                op("i", "[∂, ∂̄* + τ̄*] = 0", br(del(), delbar_star() + adj(tau_bar())), zero()),
                op("ii", "[∂̄, ∂* + τ*] = 0", br(delbar(), del_star() + adj(tau())), zero()),
            ],
        ),
        case(
            "F6",
            Section::Standard,
            "brackets with a real function's differentials",
            g,
            vec![
                op("a1", "[∂η∧, Λ] = i(∂̄η∧)*", br(w(del_eta()), lambda()), ii() * wedge_adj(delbar_eta())),
                op("a2", "[∂̄η∧, Λ] = -i(∂η∧)*", br(w(delbar_eta()), lambda()), -(ii() * wedge_adj(del_eta()))),
                op("a3", "[L, (∂η∧)*] = -i∂̄η∧", br(lefschetz(), wedge_adj(del_eta())), -(ii() * w(delbar_eta()))),
                op("a4", "[(∂̄η∧)*, L] = -i∂η∧", br(wedge_adj(delbar_eta()), lefschetz()), -(ii() * w(del_eta()))),
                op(
                    "b1",
                    "[i∂η∧∂̄η∧, Λ] = (∂η∧)(∂η∧)* - (∂̄η∧)*(∂̄η∧)",
                    br(ii() * w(del_eta() * delbar_eta()), lambda()),
                    w(del_eta()) * wedge_adj(del_eta()) - wedge_adj(delbar_eta()) * w(delbar_eta()),
                ),
                op(
                    "b2",
                    "[i∂η∧∂̄η∧, Λ] = (∂̄η∧)(∂̄η∧)* - (∂η∧)*(∂η∧)",
                    br(ii() * w(del_eta() * delbar_eta()), lambda()),
                    w(delbar_eta()) * wedge_adj(delbar_eta()) - wedge_adj(del_eta()) * w(del_eta()),
                ),
            ],
        ),
        case(
            "F7",
            Section::Standard,
            "brackets with the twisted differentials of η",
            g,
            vec![
                op("a", "[Λ, i dη η∧] = -(dm η∧)*", br(lambda(), ii() * w(d_eta_eta())), -wedge_adj(dm_eta())),
                op("b", "[Λ, i dm η∧] = (dη η∧)*", br(lambda(), ii() * w(dm_eta())), wedge_adj(d_eta_eta())),
            ],
        ),
    ]
}

/// All cases, sorted by id.
pub fn all_cases() -> Vec<IdentityCase> {
    let mut v = twist_cases();
    v.extend(commutation_cases());
    v.extend(bidegree_cases());
    v.extend(gamma_cases());
    v.extend(standard_cases());
    v.sort_by(|a, b| id_key(a.id).cmp(&id_key(b.id)));
    v
}

fn id_key(id: &str) -> (char, u32) {
    let mut ch = id.chars();
    let l = ch.next().unwrap_or('Z');
    (l, ch.as_str().parse().unwrap_or(0))
}
