use std::time::Instant;

use redideal::classifier::{b_criterion, closed_form_is_onereduced, cone_oracle};
use redideal::ideal::enumerate_reduced;
use redideal::field::FieldCtx;
use redideal::lattice::{shortest_vector, Metric};
use redideal::reducer::reduce_ideal;
use redideal::sweep::{valid_discs, verify_disc};

fn main() {
    let discs = valid_discs(5, 300, false);
    let ideals: Vec<_> = discs
        .iter()
        .flat_map(|&d| enumerate_reduced(&FieldCtx::new(d).unwrap()))
        .collect();
    println!("{} discs, {} ideals", discs.len(), ideals.len());

    let t = Instant::now();
    let n: usize = discs
        .iter()
        .map(|&d| enumerate_reduced(&FieldCtx::new(d).unwrap()).len())
        .sum();
    println!("enumerate: {:?} ({n})", t.elapsed());

    let t = Instant::now();
    let n = ideals.iter().filter(|i| closed_form_is_onereduced(i)).count();
    println!("closed_form: {:?} ({n})", t.elapsed());

    let t = Instant::now();
    let n = ideals.iter().filter(|i| b_criterion(i).one_reduced).count();
    println!("b_criterion: {:?} ({n})", t.elapsed());

    let t = Instant::now();
    let n = ideals.iter().filter(|i| cone_oracle(i).is_feasible()).count();
    println!("cone_oracle: {:?} ({n})", t.elapsed());

    let u = Metric::unit();
    let t = Instant::now();
    let mut acc = 0u64;
    for i in &ideals {
        let s = shortest_vector(&i.module(), &u).unwrap();
        acc += s.p().bits();
    }
    println!("shortest: {:?} ({acc})", t.elapsed());

    let t = Instant::now();
    let mut acc = 0u64;
    for i in &ideals {
        let r = reduce_ideal(&i.module(), &u).unwrap();
        acc += r.chosen.p().bits();
    }
    println!("reduce: {:?} ({acc})", t.elapsed());

    let t = Instant::now();
    let mut f = 0usize;
    for &d in &discs {
        f += verify_disc(d).failures.len();
    }
    println!("verify: {:?} ({f})", t.elapsed());

    for hi in [2000, 10000] {
        let t = Instant::now();
        let mut f = 0usize;
        let mut n = 0usize;
        for d in valid_discs(5, hi, false) {
            let r = verify_disc(d);
            f += r.failures.len();
            n += r.ideals;
        }
        println!("verify 5..{hi}: {:?} ({n} ideals, {f} failures)", t.elapsed());
    }
}
