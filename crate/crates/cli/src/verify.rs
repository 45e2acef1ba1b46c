use std::collections::{HashMap, HashSet};
use std::fmt::Display;

use charvar::arith::{
    phi_g_closed, phi_g_sum, phi_st_closed, phi_st_lattice_all_k, phi_st_sum, phi_stp_closed, phi_stp_sum,
    TorusVector,
};
use charvar::combinat::{c_const, enumerate_types};
use charvar::epoly::{point_count_poly, stringy_epoly, structural_checks};
use charvar::exactalg::numtheory::{divisors, gcd, is_prime, pow_mod, primitive_root};
use charvar::exactalg::IntPolynomial;
use charvar::grouporacle::block::general_linear;
use charvar::grouporacle::matrix::diagonal;
use charvar::grouporacle::samples::block_parameters;
use charvar::grouporacle::{
    brute_count, build_block_setting, character_table, check_classification, check_magic_formula, clifford_data,
    find_nice_tuple, formula_count, green_value, multipartitions_of_type, named_settings, omega_properties,
    twisted_sector_count, type_degree, Label, NamedSetting, OmegaTables, TABLE_MAX,
};
use clap::ValueEnum;
use num_bigint::BigInt;
use serde_json::json;

use crate::report::{Failure, Report};
use crate::{CliError, Context};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Mirror,
    Euler,
    PhiGrid,
    CScaling,
    Omega,
    Clifford,
    Green,
    TwistedCount,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Mirror => "mirror",
            Suite::Euler => "euler",
            Suite::PhiGrid => "phi-grid",
            Suite::CScaling => "c-scaling",
            Suite::Omega => "omega",
            Suite::Clifford => "clifford",
            Suite::Green => "green",
            Suite::TwistedCount => "twisted-count",
        }
    }
}

/// Running count of checks; remembers the first one that failed.
#[derive(Default)]
struct Tally {
    checks: usize,
    failure: Option<Failure>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, name: impl FnOnce() -> String, expected: impl Display, actual: impl Display) {
        self.checks += 1;
        if self.failure.is_some() {
            return;
        }
        let (expected, actual) = (expected.to_string(), actual.to_string());
        if expected != actual {
            self.failure = Some(Failure { name: name(), expected, actual });
        }
    }
}

pub fn run(suite: Suite, n_max: u32, genera: &[u32], q: u32, ctx: &Context) -> Result<Report, CliError> {
    if n_max == 0 || genera.is_empty() || genera.contains(&0) {
        return Err(CliError::Usage("--n-max and every genus must be positive".into()));
    }
    if !is_prime(q as u64) {
        return Err(CliError::Usage(format!("--q {q} is not prime")));
    }
    let mut t = Tally::default();
    match suite {
        Suite::Mirror => mirror(&mut t, n_max, genera)?,
        Suite::Euler => euler(&mut t, n_max, genera)?,
        Suite::PhiGrid => phi_grid(&mut t, n_max, genera)?,
        Suite::CScaling => c_scaling(&mut t, n_max)?,
        Suite::Omega => omega(&mut t, q, ctx)?,
        Suite::Clifford => clifford(&mut t, q, ctx)?,
        Suite::Green => green(&mut t, q, ctx)?,
        Suite::TwistedCount => twisted(&mut t, n_max, q, ctx)?,
    }
    if t.checks == 0 {
        t.failure = Some(Failure { name: "applicable cases".into(), expected: "at least 1".into(), actual: "0".into() });
    }
    let body = json!({
        "suite": suite.name(),
        "n_max": n_max,
        "genera": genera,
        "q": q,
        "checks": t.checks,
        "notes": t.notes,
    });
    let pass = t.failure.is_none();
    let row = vec![suite.name().to_string(), t.checks.to_string(), pass.to_string()];
    Ok(Report::new("verify", body)
        .with_table(vec!["suite", "checks", "pass"], vec![row])
        .with_failure(t.failure))
}

type Grid = HashMap<(u32, u32, u32, u64), IntPolynomial>;

fn stringy_grid(n_max: u32, genera: &[u32]) -> Result<Grid, CliError> {
    let mut out = HashMap::new();
    for n in 1..=n_max {
        for d in divisors(n as u64).into_iter().map(|d| d as u32) {
            for &g in genera {
                for k in 1..=n as u64 {
                    out.insert((n, d, g, k), stringy_epoly(n, d, g, k)?.poly);
                }
            }
        }
    }
    Ok(out)
}

fn mirror(t: &mut Tally, n_max: u32, genera: &[u32]) -> Result<(), CliError> {
    let grid = stringy_grid(n_max, genera)?;
    let mut keys: Vec<_> = grid.keys().copied().collect();
    keys.sort_unstable();
    for (n, d, g, k) in keys {
        let class = gcd(d as u64, (n / d) as u64);
        for k2 in (1..=n as u64).filter(|&k2| (k as i64 - k2 as i64).rem_euclid(class as i64) == 0) {
            t.check(
                || format!("mirror n={n} d={d} g={g} K={k} K'={k2}"),
                &grid[&(n, d, g, k)],
                &grid[&(n, n / d, g, k2)],
            );
        }
    }
    Ok(())
}

fn euler(t: &mut Tally, n_max: u32, genera: &[u32]) -> Result<(), CliError> {
    for n in 1..=n_max {
        for d in divisors(n as u64).into_iter().map(|d| d as u32) {
            for &g in genera {
                for k in 1..=n as u64 {
                    let rep = structural_checks(n, d, g, k)?;
                    for e in rep.entries.iter().filter(|e| e.name != "mirror") {
                        t.check(|| format!("{} n={n} d={d} g={g} K={k}", e.name), &e.expected, &e.actual);
                    }
                }
            }
        }
    }
    Ok(())
}

fn phi_grid(t: &mut Tally, n_max: u32, genera: &[u32]) -> Result<(), CliError> {
    let err = |e: charvar::arith::ArithError| CliError::Failure(e.to_string());
    for n in 1..=n_max as u64 {
        for d in divisors(n) {
            for s in divisors(n) {
                for &g in genera {
                    let lattices: HashMap<u64, Vec<_>> = divisors(gcd(d, s))
                        .into_iter()
                        .map(|a| Ok((a, phi_st_lattice_all_k(a, n, d, s, g).map_err(err)?)))
                        .collect::<Result<_, CliError>>()?;
                    for k in 1..=n {
                        let tag = format!("n={n} d={d} s={s} K={k} g={g}");
                        let closed = phi_g_closed(n, d, s, k, g).map_err(err)?;
                        let sum = phi_g_sum(n, d, s, k, g).map_err(err)?;
                        t.check(|| format!("phi_g {tag}"), &sum, &closed);
                        for a in divisors(gcd(d, s)) {
                            let c = phi_st_closed(a, n, d, s, k, g).map_err(err)?;
                            let sm = phi_st_sum(a, n, d, s, k, g).map_err(err)?;
                            t.check(|| format!("phi_st closed A={a} {tag}"), &sm, &c);
                            let lat = &lattices[&a][((k - 1) % d) as usize];
                            t.check(|| format!("phi_st lattice A={a} {tag}"), &sm, lat);
                        }
                        for b0 in divisors(n / d) {
                            let lhs = phi_stp_sum(b0, n, s, d, k, g).map_err(err)?;
                            let rhs = phi_stp_closed(b0, n, s, d, k, g).map_err(err)?;
                            t.check(|| format!("phi_stp B0={b0} {tag}"), &lhs, &rhs);
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn c_scaling(t: &mut Tally, n_max: u32) -> Result<(), CliError> {
    for n in 1..=n_max {
        for a in divisors(n as u64).into_iter().map(|a| a as u32) {
            for tau in enumerate_types(n / a) {
                for s in divisors((n / a) as u64).into_iter().map(|s| s as u32) {
                    let lhs = c_const(s, a, &tau)?;
                    let rhs = c_const(a * s, 1, &tau.scale(a))?;
                    t.check(|| format!("C scaling s={s} A={a} tau={tau}"), &lhs, &rhs);
                }
            }
        }
    }
    Ok(())
}

fn all_labels(moduli: [u32; 2]) -> Vec<Label> {
    (0..moduli[0]).flat_map(|i| (0..moduli[1]).map(move |j| [i, j])).collect()
}

fn omega(t: &mut Tally, q: u32, ctx: &Context) -> Result<(), CliError> {
    for NamedSetting { name, setting: s, z } in named_settings(&[q], ctx.caps)? {
        let labels = all_labels(s.moduli());
        for &x in &labels {
            for &y in &labels {
                if !s.generates(&[x, y]) {
                    continue;
                }
                let brute = brute_count(&s, 1, z, &[x], &[y])?;
                let formula = formula_count(&s, 1, z, &[x], &[y])?;
                t.check(|| format!("count {name} a={x:?} b={y:?}"), &brute, &formula);
            }
        }
        let tables = OmegaTables::new(&s)?;
        let report = if s.group().order() <= TABLE_MAX { Some(clifford_data(&s)?) } else { None };
        for theta in s.fixed_characters() {
            let rep = omega_properties(&s, &tables, theta)?;
            t.check(|| format!("omega {name} theta={theta}"), true, rep.all_hold());
            if let Some(cr) = &report {
                let e = cr.theta_ramification[theta] as usize;
                t.check(|| format!("omega kernel {name} theta={theta}"), s.k_size(), rep.kernel_size * e * e);
            }
        }
        if s.subgroup().is_abelian() {
            let instances = check_magic_formula(&s, &tables)?;
            t.checks += instances;
        }
    }
    Ok(())
}

fn clifford(t: &mut Tally, q: u32, ctx: &Context) -> Result<(), CliError> {
    for NamedSetting { name, setting: s, .. } in named_settings(&[q], ctx.caps)? {
        if s.group().order() > TABLE_MAX {
            t.notes.push(format!("{name}: order {} above the table limit", s.group().order()));
            continue;
        }
        let rep = clifford_data(&s)?;
        for c in &rep.characters {
            t.check(|| format!("clifford {name} chi={}", c.chi), true, c.satisfies_clifford(rep.k_size));
        }
    }
    for (n, a, b, q) in block_parameters(&[q], ctx.caps) {
        let bs = build_block_setting(n, a, b, q, ctx.caps)?;
        if bs.setting.k_size() == 1 {
            continue;
        }
        let tables = OmegaTables::new(&bs.setting)?;
        let rep = check_classification(&bs, &tables)?;
        t.checks += rep.ramification_checks;
    }
    Ok(())
}

/// Green values of GL_2(F_p) for primes p ≤ max(q, 5) whose group fits the
/// character-table limit.
fn green(t: &mut Tally, q: u32, ctx: &Context) -> Result<(), CliError> {
    let primes = (3..=q.max(5)).filter(|&p| is_prime(p as u64));
    for p in primes {
        let order = (p as usize * p as usize - 1) * (p as usize * p as usize - p as usize);
        if order > TABLE_MAX {
            t.notes.push(format!("GL_2(F_{p}) above the table limit"));
            continue;
        }
        let g = general_linear(p, 2, ctx.caps)?;
        let table = character_table(&g)?;
        let eps = primitive_root(p as u64);
        let mut seen = HashSet::new();
        for tau in enumerate_types(2) {
            let degree = type_degree(&tau, p)?;
            for lam in multipartitions_of_type(&tau, p) {
                let mut points = Vec::new();
                for e1 in 0..p - 1 {
                    for e2 in (0..p - 1).filter(|&e2| e2 != e1) {
                        let entries = [e1, e2].map(|e| pow_mod(eps, e as u64, p as u64) as u32);
                        let x = g
                            .index_of(&diagonal(&entries))
                            .ok_or_else(|| CliError::Failure("diagonal element missing".into()))?;
                        let v = green_value(p, &lam, &[e1, e2])?
                            .embed(table.exponent())
                            .map_err(|e| CliError::Failure(e.to_string()))?;
                        points.push((x, v));
                    }
                }
                let row = (0..table.char_count()).find(|&c| {
                    BigInt::from(table.degree(c)) == degree && points.iter().all(|(x, v)| &table.value_at(c, *x) == v)
                });
                t.check(|| format!("green p={p} {lam:?} has a table row"), true, row.is_some());
                let values: Vec<String> = points.iter().map(|(_, v)| v.to_string()).collect();
                t.check(|| format!("green p={p} {lam:?} separated"), true, seen.insert((degree.clone(), values)));
            }
        }
    }
    Ok(())
}

/// Direct genus-1 counts against S_{a,b}(q) for 2 ≤ n ≤ min(n_max, 3) with
/// n | q-1; z is the least nice element whose eigenvalues are n²-th powers.
fn twisted(t: &mut Tally, n_max: u32, q: u32, ctx: &Context) -> Result<(), CliError> {
    let eps = primitive_root(q as u64);
    for n in (2..=n_max.min(3)).filter(|n| (q - 1).is_multiple_of(*n)) {
        let Some(exps) = find_nice_tuple(n, q, n * n) else {
            t.notes.push(format!("n={n}: no nice element at q={q}"));
            continue;
        };
        let z: Vec<u32> = exps.iter().map(|&e| pow_mod(eps, e as u64, q as u64) as u32).collect();
        for d in divisors(n as u64).into_iter().map(|d| d as u32) {
            for a in TorusVector::all(d, 1) {
                for b in TorusVector::all(d, 1) {
                    let direct = twisted_sector_count(n, q, d, a.entries(), b.entries(), &z, ctx.caps)?;
                    let poly = point_count_poly(n, 1, &a, &b, ctx.convention)?;
                    t.check(
                        || format!("count n={n} d={d} q={q} a={a} b={b}"),
                        direct,
                        poly.eval_i64(q as i64),
                    );
                }
            }
        }
    }
    Ok(())
}
