//! Range verification and statistics over discriminants.
//!
//! Each discriminant is processed independently, so the sweeps fan out with
//! rayon when the `parallel` feature (default) is enabled; the `*_seq`
//! entry points always run on the current thread and back both the
//! feature-off build and the benchmark comparison. Output order is the
//! ascending discriminant order in either mode.

use num_traits::ToPrimitive;

use crate::classifier::{classify, hermite_excludes, ClassificationRecord};
use crate::field::{FieldCtx, Int};
use crate::ideal::{enumerate_reduced, IdealForm};
use crate::lattice::{is_lll_reduced, shortest_vector, sqlen, Basis2, Metric};
use crate::reducer::reduce_ideal;

/// Lemma regions predicting the unit-metric shortest vector of an ideal.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Region {
    /// `1` attains the minimum.
    UnitShortest,
    /// `f` attains the minimum.
    FShortest,
    /// `f - 1` attains the minimum.
    FMinusOneShortest,
}

/// All regions whose exact inequalities the ideal satisfies (boundaries may
/// put one ideal in several).
pub fn regions(ideal: &IdealForm) -> Vec<Region> {
    let disc = ideal.ctx().disc();
    let (a, b) = (ideal.a(), ideal.b());
    let a2_4 = Int::from(4) * a * a;
    let mut out = Vec::new();
    if &a2_4 <= disc {
        out.push(Region::UnitShortest);
    } else if &(Int::from(3) * a * a) <= disc {
        // band sqrt(D/4) <= a <= sqrt(D/3)
        let t = &a2_4 - disc; // 4a^2 - D >= 0
        let u = disc - Int::from(3) * a * a; // D - 3a^2 >= 0
        let b2 = b * b;
        let two_a_minus_b = Int::from(2) * a - b;
        let amb2 = (a - b).pow(2);
        if b2 >= t && !two_a_minus_b.is_negative() && two_a_minus_b.pow(2) >= t {
            out.push(Region::UnitShortest);
        }
        if amb2 <= u && b2 <= t {
            out.push(Region::FShortest);
        }
        if two_a_minus_b.pow(2) <= t && amb2 <= u {
            out.push(Region::FMinusOneShortest);
        }
    }
    out
}

use num_traits::Signed;

/// Which family of checked properties a failure belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FailureKind {
    /// Method disagreement or a rejected witness.
    Agreement,
    /// Hermite exclusion or the `3a^2 <= D` norm bound.
    NormBound,
    /// Lemma-region shortest-vector or basis predictions.
    Region,
    /// Reduction round trip.
    Reduction,
}

/// One failed property, with enough data to reproduce it.
#[derive(Clone, Debug)]
pub struct VerifyFailure {
    pub disc: i64,
    pub a: String,
    pub b: String,
    pub kind: FailureKind,
    pub what: String,
}

impl std::fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "disc={} a={} b={}: {}", self.disc, self.a, self.b, self.what)
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyReport {
    pub discs: usize,
    pub ideals: usize,
    pub one_reduced: usize,
    pub failures: Vec<VerifyFailure>,
}

/// Per-discriminant counts for the statistics table.
#[derive(Clone, Debug)]
pub struct DiscStats {
    pub disc: i64,
    pub n_reduced: usize,
    pub n_one_reduced: usize,
    pub max_inverse_norm: Int,
}

/// Discriminants in `[from, to]` accepted by [`FieldCtx::new`], optionally
/// restricted to fundamental ones.
pub fn valid_discs(from: i64, to: i64, fundamental_only: bool) -> Vec<i64> {
    (from.max(1)..=to)
        .filter(|&d| FieldCtx::new(d).is_ok())
        .filter(|&d| !fundamental_only || is_fundamental(d))
        .collect()
}

/// Fundamental discriminant test: `d = 1 (mod 4)` squarefree, or `d = 4m`
/// with `m` squarefree and `m = 2, 3 (mod 4)`.
pub fn is_fundamental(d: i64) -> bool {
    if d.rem_euclid(4) == 1 {
        squarefree(d)
    } else if d % 4 == 0 {
        let m = d / 4;
        squarefree(m) && matches!(m.rem_euclid(4), 2 | 3)
    } else {
        false
    }
}

fn squarefree(n: i64) -> bool {
    let mut n = n.abs();
    let mut p = 2i64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Classification records for all reduced ideals of one discriminant.
pub fn classify_disc(disc: i64) -> Vec<Result<ClassificationRecord, String>> {
    let ctx = FieldCtx::new(disc).expect("caller passes valid discriminants");
    enumerate_reduced(&ctx)
        .iter()
        .map(|i| classify(i).map_err(|e| e.to_string()))
        .collect()
}

fn fail(ideal: &IdealForm, disc: i64, kind: FailureKind, what: impl Into<String>) -> VerifyFailure {
    VerifyFailure {
        disc,
        a: ideal.a().to_string(),
        b: ideal.b().to_string(),
        kind,
        what: what.into(),
    }
}

/// Runs every checked property on every reduced ideal of one discriminant:
/// three-method agreement, Hermite-exclusion consistency, lemma-region
/// shortest-vector predictions, and the reduction round trip.
pub fn verify_disc(disc: i64) -> VerifyReport {
    let ctx = FieldCtx::new(disc).expect("caller passes valid discriminants");
    let unit = Metric::unit();
    let mut report = VerifyReport {
        discs: 1,
        ..Default::default()
    };
    for ideal in enumerate_reduced(&ctx) {
        report.ideals += 1;
        let rec = match classify(&ideal) {
            Ok(rec) => rec,
            Err(e) => {
                report
                    .failures
                    .push(fail(&ideal, disc, FailureKind::Agreement, e.to_string()));
                continue;
            }
        };
        if rec.one_reduced() {
            report.one_reduced += 1;
        }
        match hermite_excludes(2, ctx.disc(), ideal.a()) {
            Ok(true) if rec.one_reduced() => {
                report.failures.push(fail(
                    &ideal,
                    disc,
                    FailureKind::NormBound,
                    "Hermite exclusion contradicts 1-reduced verdict",
                ));
            }
            Ok(_) => {}
            Err(e) => {
                report
                    .failures
                    .push(fail(&ideal, disc, FailureKind::NormBound, e.to_string()))
            }
        }
        if rec.one_reduced() && &(Int::from(3) * ideal.a() * ideal.a()) > ctx.disc() {
            report.failures.push(fail(
                &ideal,
                disc,
                FailureKind::NormBound,
                "1-reduced ideal violates 3a^2 <= D",
            ));
        }
        for failure in region_failures(&ideal, rec.one_reduced()) {
            report
                .failures
                .push(fail(&ideal, disc, FailureKind::Region, failure));
        }
        match reduce_ideal(&ideal.module(), &unit) {
            Ok(res) => {
                match classify(&res.output) {
                    Ok(out_rec) if out_rec.one_reduced() => {}
                    Ok(_) => report.failures.push(fail(
                        &ideal,
                        disc,
                        FailureKind::Reduction,
                        "reduction output is not 1-reduced",
                    )),
                    Err(e) => {
                        report
                            .failures
                            .push(fail(&ideal, disc, FailureKind::Reduction, e.to_string()))
                    }
                }
                // fixed point when 1 is already shortest
                if res.chosen.square() == ctx.one() && res.output != ideal {
                    report.failures.push(fail(
                        &ideal,
                        disc,
                        FailureKind::Reduction,
                        "unit shortest vector but reduction moved the ideal",
                    ));
                }
            }
            Err(e) => {
                report
                    .failures
                    .push(fail(&ideal, disc, FailureKind::Reduction, e.to_string()))
            }
        }
    }
    report
}

fn region_failures(ideal: &IdealForm, one_reduced: bool) -> Vec<String> {
    let mut out = Vec::new();
    let regs = regions(ideal);
    if one_reduced && regs.is_empty() {
        out.push("1-reduced ideal not covered by any lemma region".to_string());
        return out;
    }
    if regs.is_empty() {
        return out;
    }
    let ctx = ideal.ctx();
    let unit = Metric::unit();
    let sv = shortest_vector(&ideal.module(), &unit).expect("nondegenerate");
    let min_len = sqlen(&sv, &unit);
    let f = ideal.f();
    for reg in regs {
        let (predicted, basis) = match reg {
            Region::UnitShortest => (ctx.one(), None),
            Region::FShortest => (f.clone(), Some((f.clone(), ctx.one()))),
            Region::FMinusOneShortest => {
                let fm1 = &f - &ctx.one();
                (fm1.clone(), Some((fm1, ctx.one())))
            }
        };
        if sqlen(&predicted, &unit) != min_len {
            out.push(format!("{reg:?}: predicted vector does not attain the minimum"));
        }
        if let Some((v1, v2)) = basis {
            let b = Basis2::new(v1, v2, unit.clone()).expect("independent");
            if !is_lll_reduced(&b) {
                out.push(format!("{reg:?}: predicted basis is not LLL-reduced"));
            }
        }
    }
    out
}

fn merge_reports(parts: Vec<VerifyReport>) -> VerifyReport {
    let mut total = VerifyReport::default();
    for p in parts {
        total.discs += p.discs;
        total.ideals += p.ideals;
        total.one_reduced += p.one_reduced;
        total.failures.extend(p.failures);
    }
    total
}

fn stats_disc(disc: i64) -> DiscStats {
    let ctx = FieldCtx::new(disc).expect("caller passes valid discriminants");
    let ideals = enumerate_reduced(&ctx);
    let n_one = ideals
        .iter()
        .filter(|i| crate::classifier::closed_form_is_onereduced(i))
        .count();
    let max_a = ideals
        .iter()
        .map(|i| i.a().clone())
        .max()
        .unwrap_or_else(|| Int::from(0));
    DiscStats {
        disc,
        n_reduced: ideals.len(),
        n_one_reduced: n_one,
        max_inverse_norm: max_a,
    }
}

impl DiscStats {
    /// `sqrt(D/3)`, the norm bound of the two-dimensional Hermite exclusion.
    pub fn bound_sqrt_disc_over_3(&self) -> f64 {
        (self.disc.to_f64().unwrap() / 3.0).sqrt()
    }
}

fn map_discs<T, F>(discs: Vec<i64>, f: F, jobs: Option<usize>) -> Vec<T>
where
    F: Fn(i64) -> T + Sync + Send,
    T: Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let run = || discs.par_iter().map(|&d| f(d)).collect();
        return match jobs {
            Some(j) => rayon::ThreadPoolBuilder::new()
                .num_threads(j)
                .build()
                .expect("thread pool")
                .install(run),
            None => run(),
        };
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        discs.into_iter().map(f).collect()
    }
}

pub fn verify_range(
    from: i64,
    to: i64,
    fundamental_only: bool,
    jobs: Option<usize>,
) -> VerifyReport {
    let discs = valid_discs(from, to, fundamental_only);
    merge_reports(map_discs(discs, verify_disc, jobs))
}

/// Sequential counterpart of [`verify_range`]; used as the benchmark
/// baseline and by the feature-off build.
pub fn verify_range_seq(from: i64, to: i64, fundamental_only: bool) -> VerifyReport {
    let discs = valid_discs(from, to, fundamental_only);
    merge_reports(discs.into_iter().map(verify_disc).collect())
}

pub fn stats_range(
    from: i64,
    to: i64,
    fundamental_only: bool,
    jobs: Option<usize>,
) -> Vec<DiscStats> {
    let discs = valid_discs(from, to, fundamental_only);
    map_discs(discs, stats_disc, jobs)
}

pub fn stats_range_seq(from: i64, to: i64, fundamental_only: bool) -> Vec<DiscStats> {
    let discs = valid_discs(from, to, fundamental_only);
    discs.into_iter().map(stats_disc).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn region_examples() {
        let ctx = FieldCtx::new(73).unwrap();
        let i = IdealForm::new(&ctx, 1, 7).unwrap();
        assert_eq!(regions(&i), vec![Region::UnitShortest]);
        // (28, 3, 2) sits on the case-3/boundary of the band
        let ctx = FieldCtx::new(28).unwrap();
        let i = IdealForm::new(&ctx, 3, 2).unwrap();
        assert!(regions(&i).contains(&Region::FShortest));
        // (2044, 25, 38) is in the f-1 region
        let ctx = FieldCtx::new(2044).unwrap();
        let i = IdealForm::new(&ctx, 25, 38).unwrap();
        assert_eq!(regions(&i), vec![Region::FMinusOneShortest]);
        // a = 6 ideals of disc 73 are outside every region
        let ctx = FieldCtx::new(73).unwrap();
        let i = IdealForm::new(&ctx, 6, 5).unwrap();
        assert!(regions(&i).is_empty());
    }

    #[test]
    fn verify_disc_73() {
        let report = verify_disc(73);
        assert_eq!(report.ideals, 9);
        assert_eq!(report.one_reduced, 7);
        assert!(report.failures.is_empty(), "{:?}", report.failures);
    }

    #[test]
    fn small_range_clean() {
        let report = verify_range_seq(5, 150, false);
        assert!(report.failures.is_empty(), "{:?}", report.failures);
        assert!(report.discs > 0 && report.ideals > 0);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let seq = verify_range_seq(5, 300, false);
        let par = verify_range(5, 300, false, Some(4));
        assert_eq!(seq.discs, par.discs);
        assert_eq!(seq.ideals, par.ideals);
        assert_eq!(seq.one_reduced, par.one_reduced);
        assert_eq!(seq.failures.len(), par.failures.len());
    }

    #[test]
    fn stats_disc_73() {
        let stats = stats_range_seq(73, 73, false);
        assert_eq!(stats.len(), 1);
        assert_eq!(stats[0].n_reduced, 9);
        assert_eq!(stats[0].n_one_reduced, 7);
        assert_eq!(stats[0].max_inverse_norm, Int::from(6));
    }

    #[test]
    fn fundamental_filter() {
        assert!(is_fundamental(5));
        assert!(is_fundamental(8));
        assert!(is_fundamental(12));
        assert!(is_fundamental(73));
        assert!(!is_fundamental(20)); // 4 * 5 with 5 = 1 mod 4
        assert!(!is_fundamental(45)); // 9 * 5 not squarefree
        assert!(is_fundamental(2044)); // 4 * 511, 511 = 7 * 73 squarefree, 511 = 3 mod 4
        let discs = valid_discs(5, 50, true);
        assert!(discs.contains(&5) && discs.contains(&8));
        assert!(!discs.contains(&16) && !discs.contains(&32));
    }
}
