//! Three mutually checking tests for whether a reduced ideal is 1-reduced,
//! i.e. admits a positive metric making `1` a shortest lattice vector.
//!
//! * closed form: the exact integer inequality `(b-a)^2 + 3a^2 <= D`;
//! * B-criterion: compare extremal quartic ratios `B(g)` over a five-vector
//!   candidate set built from a reduced basis (carried as `B^4`, so fourth
//!   roots never materialize);
//! * cone oracle: enumerate every lattice vector in the candidate region and
//!   intersect the half-plane constraints on the weight ratio `s/w` directly.
//!
//! The three verdicts must coincide on every reduced ideal; disagreement is
//! reported as a hard error, never swallowed.

use num_traits::{One, Signed};
use thiserror::Error;

use crate::field::{Int, QElem, Rat};
use crate::ideal::IdealForm;
use crate::lattice::{shortest_vector, sqlen, Metric};
use crate::pi::{below_pi_threshold, threshold_upper_bound};

#[derive(Debug, Error, PartialEq)]
pub enum ClassifierError {
    #[error("no Hermite bound stored for dimension {0}")]
    UnknownDimension(u32),
    #[error("vector fails the G membership conditions")]
    NotInG,
    #[error(
        "methods disagree on disc={disc} a={a} b={b}: closed_form={closed} \
         b_criterion={bcrit} cone={cone}"
    )]
    MethodsDisagree {
        disc: Int,
        a: Int,
        b: Int,
        closed: bool,
        bcrit: bool,
        cone: bool,
    },
    #[error("cone witness rejected by shortest-vector check on disc={disc} a={a} b={b}")]
    WitnessRejected { disc: Int, a: Int, b: Int },
}

/// Which embedding square drops below 1.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    G1,
    G2,
}

/// A lattice vector in the candidate set `G`: `(σ(g)^2-1)(σ'(g)^2-1) < 0`
/// and squared unit-metric length below `64/pi^2`.
#[derive(Clone, Debug)]
pub struct GVector {
    g: QElem,
    e: QElem, // g^2 - 1
    side: Side,
}

impl GVector {
    /// Exact membership test; `None` when `g` is not in `G`.
    pub fn try_new(g: &QElem) -> Option<GVector> {
        let e = &g.square() - &g.ctx().one();
        let s1 = e.signum();
        let s2 = e.conj().signum();
        if s1 * s2 >= 0 {
            return None;
        }
        let len = sqlen(g, &Metric::unit())
            .as_rat()
            .expect("unit-metric squared length is rational");
        if !below_pi_threshold(&len) {
            return None;
        }
        let side = if s1 < 0 { Side::G1 } else { Side::G2 };
        Some(GVector { g: g.clone(), e, side })
    }

    pub fn g(&self) -> &QElem {
        &self.g
    }
    pub fn side(&self) -> Side {
        self.side
    }

    /// `B(g)^4 = -(σ(g)^2 - 1) / (σ'(g)^2 - 1)`, positive by membership.
    pub fn b_value4(&self) -> QElem {
        -&self
            .e
            .checked_div(&self.e.conj())
            .expect("denominator nonzero by the sign condition")
    }

    /// The weight-ratio bound `-σ'(e)/σ(e)` induced by the constraint
    /// `s (σ(g)^2 - 1) + w (σ'(g)^2 - 1) >= 0`; an upper bound on `s/w` for
    /// `G1` vectors and a lower bound for `G2` vectors. Equals `B(g)^{-4}`.
    pub fn ratio_bound(&self) -> QElem {
        -&self
            .e
            .conj()
            .checked_div(&self.e)
            .expect("σ(e) nonzero by the sign condition")
    }
}

/// `B(g)^4` for a vector already known to be in `G`.
pub fn b_value4(g: &QElem) -> Result<QElem, ClassifierError> {
    GVector::try_new(g).map(|gv| gv.b_value4()).ok_or(ClassifierError::NotInG)
}

/// The tight criterion: `I` is 1-reduced iff `(b-a)^2 + 3a^2 <= D`
/// (equivalently `N(f - 1/2) <= -3/4`).
pub fn closed_form_is_onereduced(ideal: &IdealForm) -> bool {
    let lhs = (ideal.b() - ideal.a()).pow(2) + 3 * ideal.a() * ideal.a();
    &lhs <= ideal.ctx().disc()
}

/// True on exact equality `(b-a)^2 + 3a^2 = D`, the boundary of the
/// criterion (`N(f - 1/2) = -3/4`).
pub fn is_boundary(ideal: &IdealForm) -> bool {
    let lhs = (ideal.b() - ideal.a()).pow(2) + 3 * ideal.a() * ideal.a();
    &lhs == ideal.ctx().disc()
}

/// Outcome of the B-criterion, with the extremal `B^4` values (defaults
/// `1/16` and `16` standing for `B_min = 1/2`, `B_max = 2`).
#[derive(Clone, Debug)]
pub struct BCriterion {
    pub one_reduced: bool,
    pub bmin4: QElem,
    pub bmax4: QElem,
    /// Set when the unit metric already makes 1 shortest (squared shortest
    /// length at least 2), in which case the candidate scan is skipped.
    pub unit_shortcut: bool,
}

/// Decides 1-reducedness via `B_max >= B_min` over the five-vector candidate
/// set `{b1, b1+1, 1-b1, 2b1+1, 1-2b1}` built from a shortest vector `b1`
/// paired with the basis vector 1.
pub fn b_criterion(ideal: &IdealForm) -> BCriterion {
    let ctx = ideal.ctx();
    let unit = Metric::unit();
    let module = ideal.module();
    let sv = shortest_vector(&module, &unit).expect("ideal module is nondegenerate");
    let two = ctx.from_int(2);
    let default_min = ctx.from_rat(&Rat::new(Int::one(), Int::from(16)));
    let default_max = ctx.from_int(16);
    if sqlen(&sv, &unit) >= two {
        // 1 attains the minimum: 1-reduced with u = (1, 1)
        return BCriterion {
            one_reduced: true,
            bmin4: default_min,
            bmax4: default_max,
            unit_shortcut: true,
        };
    }
    let one = ctx.one();
    let twice = &sv + &sv;
    let candidates = [
        sv.clone(),
        &sv + &one,
        &one - &sv,
        &twice + &one,
        &one - &twice,
    ];
    let mut bmin4: Option<QElem> = None;
    let mut bmax4: Option<QElem> = None;
    for cand in &candidates {
        if let Some(gv) = GVector::try_new(cand) {
            let val = gv.b_value4();
            match gv.side() {
                Side::G1 => {
                    bmin4 = Some(match bmin4 {
                        Some(cur) if cur >= val => cur,
                        _ => val,
                    })
                }
                Side::G2 => {
                    bmax4 = Some(match bmax4 {
                        Some(cur) if cur <= val => cur,
                        _ => val,
                    })
                }
            }
        }
    }
    let bmin4 = bmin4.unwrap_or(default_min);
    let bmax4 = bmax4.unwrap_or(default_max);
    BCriterion {
        one_reduced: bmax4 >= bmin4,
        bmin4,
        bmax4,
        unit_shortcut: false,
    }
}

/// Feasibility of the weight-ratio cone.
#[derive(Clone, Debug, PartialEq)]
pub enum ConeVerdict {
    /// No positive weight pair makes 1 shortest.
    Empty,
    /// Nonempty interior with a rational witness ratio `s/w` strictly inside.
    Interior { witness: Rat },
    /// The cone collapses to the single (generally irrational) ratio given.
    Degenerate { boundary: QElem },
}

impl ConeVerdict {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, ConeVerdict::Empty)
    }
}

/// Direct feasibility check over the metric: every lattice vector in `G`
/// contributes a half-line constraint on `s/w`; the verdict is the exact
/// intersection. Deliberately scans all of `G` rather than the five-vector
/// shortcut, so this oracle and [`b_criterion`] fail independently.
pub fn cone_oracle(ideal: &IdealForm) -> ConeVerdict {
    let ctx = ideal.ctx();
    let f = ideal.f();
    let upper = threshold_upper_bound();
    // ||m + n f||^2 >= n^2 D / (2 a^2); bound n by n^2 < 2 a^2 U / D
    let a2 = ideal.a() * ideal.a();
    let n_num = Int::from(2) * &a2 * upper.numer();
    let n_den = upper.denom() * ctx.disc();
    let n_bound: Int = (n_num / n_den).sqrt() + 1;
    let mut lower: Option<QElem> = None;
    let mut upper_b: Option<QElem> = None;
    let mut n = Int::one();
    while n <= n_bound {
        // m near -n b / (2a)
        let center = Rat::new(-(&n * ideal.b()), Int::from(2) * ideal.a());
        let m0 = center.floor().to_integer();
        let mut m: Int = &m0 - Int::from(2);
        let m_hi = m0 + 3;
        while m <= m_hi {
            let g = &ctx.from_int(m.clone()) + &(&ctx.from_int(n.clone()) * &f);
            if let Some(gv) = GVector::try_new(&g) {
                let bound = gv.ratio_bound();
                match gv.side() {
                    Side::G1 => {
                        upper_b = Some(match upper_b {
                            Some(cur) if cur <= bound => cur,
                            _ => bound,
                        })
                    }
                    Side::G2 => {
                        lower = Some(match lower {
                            Some(cur) if cur >= bound => cur,
                            _ => bound,
                        })
                    }
                }
            }
            m += 1;
        }
        n += 1;
    }
    match (lower, upper_b) {
        (None, None) => ConeVerdict::Interior {
            witness: Rat::one(),
        },
        (Some(lo), None) => {
            let w = lo.floor() + 1;
            ConeVerdict::Interior {
                witness: Rat::from_integer(w),
            }
        }
        (None, Some(hi)) => ConeVerdict::Interior {
            witness: rational_between(&hi.ctx().zero(), &hi),
        },
        (Some(lo), Some(hi)) => {
            if lo < hi {
                ConeVerdict::Interior {
                    witness: rational_between(&lo, &hi),
                }
            } else if lo == hi {
                ConeVerdict::Degenerate { boundary: lo }
            } else {
                ConeVerdict::Empty
            }
        }
    }
}

/// A rational strictly between two exact values, by dyadic refinement.
fn rational_between(lo: &QElem, hi: &QElem) -> Rat {
    debug_assert!(lo < hi);
    let ctx = lo.ctx();
    let mut denom = Int::one();
    loop {
        let num = (&ctx.from_int(denom.clone()) * lo).floor() + 1;
        let cand = Rat::new(num, denom.clone());
        if &ctx.from_rat(&cand) < hi {
            return cand;
        }
        denom *= 2;
    }
}

/// Checks that the metric `u = (sqrt(ratio), 1)` really makes 1 a shortest
/// vector of the ideal lattice.
pub fn verify_witness(ideal: &IdealForm, ratio: &Rat) -> bool {
    assert!(ratio.is_positive());
    let u = Metric::rational(ratio.clone(), Rat::one()).expect("positive ratio");
    let module = ideal.module();
    let sv = shortest_vector(&module, &u).expect("ideal module is nondegenerate");
    sqlen(&sv, &u) == sqlen(&module.ctx().one(), &u)
}

/// `c_n = (n / gamma_n)^n` for the dimensions with known Hermite constants.
fn hermite_c(n: u32) -> Option<Rat> {
    let r = |num: i128, den: i128| {
        Some(Rat::new(Int::from(num), Int::from(den)))
    };
    match n {
        2 => r(3, 1),
        3 => r(27, 2),
        4 => r(1 << 6, 1),
        5 => r(5i128.pow(5), 8),
        6 => r(3i128.pow(7), 1),
        7 => r(7i128.pow(7), 64),
        8 => r(4i128.pow(8), 1),
        24 => r(6i128.pow(24), 1),
        _ => None,
    }
}

/// Certified exclusion in any degree: an ideal with `N(I^{-1})^2 c_n > |D|`
/// cannot be 1-reduced.
pub fn hermite_excludes(
    n: u32,
    abs_disc: &Int,
    norm_inv: &Int,
) -> Result<bool, ClassifierError> {
    let c = hermite_c(n).ok_or(ClassifierError::UnknownDimension(n))?;
    let lhs = norm_inv * norm_inv * c.numer();
    let rhs = abs_disc * c.denom();
    Ok(lhs > rhs)
}

/// Per-ideal verdicts and certificates from the three methods.
#[derive(Clone, Debug)]
pub struct ClassificationRecord {
    pub ideal: IdealForm,
    pub closed_form: bool,
    pub b_criterion: bool,
    pub cone_oracle: bool,
    pub bmin4: QElem,
    pub bmax4: QElem,
    pub witness_ratio: Option<Rat>,
    /// Exact equality `(b-a)^2 + 3a^2 = D`.
    pub boundary: bool,
    pub methods_agree: bool,
}

impl ClassificationRecord {
    pub fn one_reduced(&self) -> bool {
        self.closed_form
    }
}

/// Runs all three methods, verifies any interior witness, and demands
/// agreement; disagreement indicates an implementation defect and is
/// surfaced as an error.
pub fn classify(ideal: &IdealForm) -> Result<ClassificationRecord, ClassifierError> {
    let closed = closed_form_is_onereduced(ideal);
    let bc = b_criterion(ideal);
    let cone = cone_oracle(ideal);
    let cone_ok = cone.is_feasible();
    if closed != bc.one_reduced || closed != cone_ok {
        return Err(ClassifierError::MethodsDisagree {
            disc: ideal.ctx().disc().clone(),
            a: ideal.a().clone(),
            b: ideal.b().clone(),
            closed,
            bcrit: bc.one_reduced,
            cone: cone_ok,
        });
    }
    let witness_ratio = match &cone {
        ConeVerdict::Interior { witness } => {
            if !verify_witness(ideal, witness) {
                return Err(ClassifierError::WitnessRejected {
                    disc: ideal.ctx().disc().clone(),
                    a: ideal.a().clone(),
                    b: ideal.b().clone(),
                });
            }
            Some(witness.clone())
        }
        _ => None,
    };
    Ok(ClassificationRecord {
        ideal: ideal.clone(),
        closed_form: closed,
        b_criterion: bc.one_reduced,
        cone_oracle: cone_ok,
        bmin4: bc.bmin4,
        bmax4: bc.bmax4,
        witness_ratio,
        boundary: is_boundary(ideal),
        methods_agree: true,
    })
}
