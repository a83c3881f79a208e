use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;

use isum::ed::{build_hamiltonian, build_parity, build_string_operator, chi_finite_difference, commutator_max, MAX_SPINS};
use isum::identities::{closed_form, direct_sum, identity_queries, scaled_error, verify as verify_query, SumQuery};
use isum::observables::{cd_coefficient, cd_coefficient_direct, cd_table, chi_closed, chi_direct, chi_max};
use isum::{SectorFamily, VerificationReport64};

use crate::grid::{parse_counts, parse_grid};
use crate::output::{float, write_csv};
use crate::{BenchArgs, CdArgs, ChiArgs, ChimaxArgs, CliError, EdcheckArgs, VerifyArgs};

const COMMUTATOR_TOL: f64 = 1e-13;

pub fn verify(a: VerifyArgs) -> Result<bool, CliError> {
    if a.n_max == 0 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    if !(a.tol >= 0.0) {
        return Err(CliError::Usage(format!("--tol must be non-negative, got {}", a.tol)));
    }
    let xs = parse_grid(&a.x_grid)?;
    let queries = identity_queries(&a.families, &a.kinds, a.n_max, &xs);
    let reports: Vec<VerificationReport64> =
        queries.par_iter().map(|q| verify_query(q, a.tol)).collect::<Result<_, _>>()?;

    let mut all = true;
    for tag in &a.families {
        let mine: Vec<_> = reports.iter().filter(|r| r.query.family == *tag).collect();
        let passed = mine.iter().filter(|r| r.pass).count();
        all &= passed == mine.len();
        println!("{tag}: {passed}/{} passed", mine.len());
    }
    let passed = reports.iter().filter(|r| r.pass).count();
    println!("total: {passed}/{} passed", reports.len());
    for r in reports.iter().filter(|r| !r.pass).take(10) {
        let q = &r.query;
        eprintln!("FAIL {} {} n={} m={} x={}: rel_err {:e}", q.kind, q.family, q.n, q.m, q.x, r.rel_err);
    }
    if let Some(path) = &a.out {
        let mut w = crate::output::open(Some(path))?;
        serde_json::to_writer_pretty(&mut w, &reports)?;
        writeln!(w)?;
    }
    Ok(all)
}

pub fn chi(a: ChiArgs) -> Result<bool, CliError> {
    let gs = parse_grid(&a.g)?;
    let n = a.n_spins;
    let rows = gs
        .par_iter()
        .map(|&g| -> Result<Vec<String>, CliError> {
            let c = chi_closed(n, g)?;
            let mut row = vec![n.to_string(), float(g), float(c)];
            if let Some(p) = a.parity {
                let d = chi_direct(n, p, g)?;
                let err = if c == 0.0 { d.abs() } else { (d - c).abs() / c.abs() };
                row.push(float(d));
                row.push(float(err));
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut header = vec!["N", "g", "chi_closed"];
    if a.parity.is_some() {
        header.extend(["chi_direct", "rel_err"]);
    }
    write_csv(a.out.as_deref(), &header, &rows)?;
    Ok(true)
}

pub fn chimax(a: ChimaxArgs) -> Result<bool, CliError> {
    let sizes = parse_counts(&a.n_list)?;
    let rows = sizes
        .par_iter()
        .map(|&n| -> Result<Vec<String>, CliError> {
            let (g, c) = chi_max::<f64>(n)?;
            Ok(vec![n.to_string(), float(g), float(c), float(1.0 - g)])
        })
        .collect::<Result<Vec<_>, _>>()?;
    write_csv(a.out.as_deref(), &["N", "g_star", "chi_star", "one_minus_gstar"], &rows)?;
    Ok(true)
}

pub fn cd(a: CdArgs) -> Result<bool, CliError> {
    let gs = parse_grid(&a.g)?;
    let n = a.n_spins;
    let parity = a.parity;
    if a.table {
        let mut rows = Vec::new();
        for &g in &gs {
            let t = cd_table(n, parity, g)?;
            for (i, w) in t.weights.iter().enumerate() {
                rows.push(vec![n.to_string(), parity.to_string(), float(g), (i + 1).to_string(), float(*w)]);
            }
        }
        write_csv(a.out.as_deref(), &["N", "parity", "g", "m", "weight"], &rows)?;
        return Ok(true);
    }
    let orders: Vec<u64> = match a.m {
        Some(m) => vec![m],
        None => (1..n).collect(),
    };
    let with_direct = n <= a.direct_cutoff;
    let cases: Vec<(f64, u64)> = gs.iter().flat_map(|&g| orders.iter().map(move |&m| (g, m))).collect();
    let results = cases
        .par_iter()
        .map(|&(g, m)| -> Result<(Vec<String>, bool), CliError> {
            let c = cd_coefficient(n, parity, m, g)?;
            let mut row = vec![n.to_string(), parity.to_string(), float(g), m.to_string(), float(c)];
            let mut ok = true;
            if with_direct {
                let d = cd_coefficient_direct(n, parity, m, g)?;
                let err = scaled_error(d, c);
                ok = err <= a.tol;
                row.push(float(d));
                row.push(float(err));
            }
            Ok((row, ok))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut header = vec!["N", "parity", "g", "m", "h_closed"];
    if with_direct {
        header.extend(["h_direct", "rel_err"]);
    }
    let ok = results.iter().all(|(_, ok)| *ok);
    let rows: Vec<Vec<String>> = results.into_iter().map(|(r, _)| r).collect();
    write_csv(a.out.as_deref(), &header, &rows)?;
    Ok(ok)
}

pub fn edcheck(a: EdcheckArgs) -> Result<bool, CliError> {
    let n = a.n_spins;
    if !(2..=MAX_SPINS).contains(&n) {
        return Err(CliError::Usage(format!("--N must lie in 2..={MAX_SPINS}, got {n}")));
    }
    let fd = chi_finite_difference(n, a.g, a.delta)?;
    let c = chi_closed(n as u64, a.g)?;
    let allowed = (1e-5 * c).max(10.0 * a.delta * a.delta * c);
    let diff = (fd.chi - c).abs();
    println!("N = {n}, g = {}, delta = {}", a.g, a.delta);
    println!("chi_fd = {}", float(fd.chi));
    println!("chi_closed = {}", float(c));
    println!("abs_err = {} (allowed {})", float(diff), float(allowed));
    println!("ground-state parity = {}{}", fd.parity, if fd.degenerate { " (degenerate)" } else { "" });

    let p = build_parity(n)?;
    let hp = commutator_max(&build_hamiltonian(n, a.g)?, &p);
    println!("max|[H, P]| = {}", float(hp));
    let mut worst = hp;
    for m in 1..n {
        let s = commutator_max(&build_string_operator(n, m)?, &p);
        println!("max|[H^[{m}], P]| = {}", float(s));
        worst = worst.max(s);
    }
    let ok = diff <= allowed && worst <= COMMUTATOR_TOL;
    println!("{}", if ok { "ok" } else { "contract violated" });
    Ok(ok)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Median over `reps` of the per-call time in nanoseconds.
fn time_per_call(reps: usize, calls: usize, mut f: impl FnMut() -> f64) -> f64 {
    let samples = (0..reps)
        .map(|_| {
            let start = Instant::now();
            for _ in 0..calls {
                black_box(f());
            }
            start.elapsed().as_nanos() as f64 / calls as f64
        })
        .collect();
    median(samples)
}

pub fn bench(a: BenchArgs) -> Result<bool, CliError> {
    if a.reps == 0 {
        return Err(CliError::Usage("--reps must be positive".into()));
    }
    let family = SectorFamily::new(a.family, a.n)?;
    let q = SumQuery::new(a.kind, family, a.m, a.x)?;
    let closed = closed_form(&q)?;
    let direct = direct_sum(&q)?;
    let closed_ns = time_per_call(a.reps, 10_000, || closed_form(black_box(&q)).unwrap_or(f64::NAN));
    let direct_calls = (1_000_000 / a.n.max(1)).clamp(1, 1000) as usize;
    let direct_ns = time_per_call(a.reps, direct_calls, || direct_sum(black_box(&q)).unwrap_or(f64::NAN));
    println!("query: kind {} family {} n {} m {} x {}", a.kind, a.family, a.n, a.m, a.x);
    println!("closed = {}", float(closed));
    println!("direct = {}", float(direct));
    println!("closed_ns_per_eval = {closed_ns:.1}");
    println!("direct_ns_per_eval = {direct_ns:.1}");
    println!("speedup = {:.3e}", direct_ns / closed_ns);
    Ok(true)
}
