use std::hint::black_box;
use std::time::Instant;

use isum::identities::{closed_form, SumQuery};
use isum::{FamilyTag, SectorFamily, SumKind};

fn best_ns(n: u64) -> f64 {
    let q = SumQuery::new(SumKind::F, SectorFamily::new(FamilyTag::OddNeg, n).unwrap(), 3, 0.37).unwrap();
    (0..15)
        .map(|_| {
            let start = Instant::now();
            for _ in 0..2000 {
                black_box(closed_form(black_box(&q)).unwrap());
            }
            start.elapsed().as_nanos() as f64 / 2000.0
        })
        .fold(f64::INFINITY, f64::min)
}

#[test]
fn closed_form_cost_is_independent_of_size() {
    let small = best_ns(10);
    let large = best_ns(1_000_000);
    assert!(large <= 3.0 * small.max(1.0), "n=10: {small} ns, n=1e6: {large} ns");
}
