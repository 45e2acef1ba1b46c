use std::path::Path;

use charvar::arith::TorusVector;
use charvar::combinat::{c_check, c_const, enumerate_types, nu, theta_count};
use charvar::epoly::{isotypic_epoly, point_count_poly, sector_epoly, structural_checks, EPolyMeta, SRangeConvention};
use charvar::exactalg::numtheory::divisors;
use charvar::grouporacle::{Fixture, Label};
use serde_json::{json, Value};

use crate::report::{coefficients, poly_json, Failure, Report};
use crate::{cache, CliError, Context};

fn meta_json(m: &EPolyMeta) -> Value {
    json!({
        "n": m.n,
        "d": m.d,
        "g": m.g,
        "k": m.k_raw,
        "k_reduced": m.k,
        "variant": m.variant.to_string(),
        "order": m.order,
        "shift": m.shift,
    })
}

pub fn epoly(n: u32, d: u32, g: u32, k: u64) -> Result<Report, CliError> {
    let rep = structural_checks(n, d, g, k)?;
    let checks: Vec<Value> = rep
        .entries
        .iter()
        .map(|e| json!({ "name": e.name, "pass": e.pass, "expected": e.expected, "actual": e.actual }))
        .collect();
    let failure = rep
        .first_failure()
        .map(|e| Failure { name: e.name.clone(), expected: e.expected.clone(), actual: e.actual.clone() });
    let body = json!({
        "n": n,
        "d": d,
        "g": g,
        "k": k,
        "k_reduced": rep.k,
        "polynomial": poly_json(&rep.polynomial),
        "euler_characteristic": rep.euler_characteristic.to_string(),
        "checks": checks,
    });
    Ok(Report::new("epoly", body).with_poly(&rep.polynomial).with_failure(failure))
}

pub fn sector(n: u32, d: u32, g: u32, k: u64, a: u32) -> Result<Report, CliError> {
    let e = sector_epoly(n, d, g, k, a)?;
    let body = json!({ "meta": meta_json(&e.meta), "polynomial": poly_json(&e.poly) });
    Ok(Report::new("sector", body).with_poly(&e.poly))
}

pub fn isotypic(n: u32, d: u32, g: u32, k: u64, xi_order: u32) -> Result<Report, CliError> {
    let r = isotypic_epoly(n, d, g, k, xi_order)?;
    let failure = (!r.agree).then(|| Failure {
        name: "isotypic routes".into(),
        expected: r.via_phi_stp.poly.to_string(),
        actual: r.via_mirror_sector.poly.to_string(),
    });
    let body = json!({
        "xi_order": xi_order,
        "agree": r.agree,
        "via_phi_stp": { "meta": meta_json(&r.via_phi_stp.meta), "polynomial": poly_json(&r.via_phi_stp.poly) },
        "via_mirror_sector": {
            "meta": meta_json(&r.via_mirror_sector.meta),
            "polynomial": poly_json(&r.via_mirror_sector.poly),
        },
    });
    Ok(Report::new("isotypic", body).with_poly(&r.via_phi_stp.poly).with_failure(failure))
}

pub fn count(n: u32, g: u32, d: u32, entries: &[i64], convention: SRangeConvention) -> Result<Report, CliError> {
    let half = 2 * g as usize;
    if g == 0 || entries.len() != 2 * half {
        return Err(CliError::Usage(format!("count needs 4g = {} entries after n g d, got {}", 2 * half, entries.len())));
    }
    let a = TorusVector::new(d, &entries[..half]).map_err(|e| CliError::Usage(e.to_string()))?;
    let b = TorusVector::new(d, &entries[half..]).map_err(|e| CliError::Usage(e.to_string()))?;
    let p = point_count_poly(n, g, &a, &b, convention)?;
    let body = json!({
        "n": n,
        "g": g,
        "d": d,
        "a": a.entries(),
        "b": b.entries(),
        "s_range_convention": match convention {
            SRangeConvention::EA => "eA",
            SRangeConvention::Theorem => "theorem",
        },
        "polynomial": poly_json(&p),
    });
    Ok(Report::new("count", body).with_poly(&p))
}

pub fn constants(n: u32) -> Result<Report, CliError> {
    if n == 0 {
        return Err(CliError::Usage("n must be positive".into()));
    }
    let header = vec!["A", "tau", "s", "C", "C_check", "nu", "theta", "d_tau", "Q_tau"];
    let mut rows = Vec::new();
    let mut items = Vec::new();
    for a in divisors(n as u64).into_iter().map(|a| a as u32) {
        for tau in enumerate_types(n / a) {
            let theta = theta_count(&tau, n, a)?;
            let q_tau = tau.dim_quotient_poly();
            for s in divisors((n / a) as u64).into_iter().map(|s| s as u32) {
                let c = c_const(s, a, &tau)?;
                let cc = c_check(s, a, &tau)?;
                let nu_val = nu(&tau, s);
                rows.push(vec![
                    a.to_string(),
                    tau.to_string(),
                    s.to_string(),
                    c.to_string(),
                    cc.to_string(),
                    nu_val.to_string(),
                    theta.to_string(),
                    tau.d_tau().to_string(),
                    q_tau.to_string(),
                ]);
                items.push(json!({
                    "A": a,
                    "tau": tau.to_string(),
                    "s": s,
                    "C": c.to_string(),
                    "C_check": cc.to_string(),
                    "nu": nu_val.to_string(),
                    "theta": theta.to_string(),
                    "d_tau": tau.d_tau().to_string(),
                    "Q_tau": coefficients(&q_tau),
                }));
            }
        }
    }
    Ok(Report::new("constants", json!({ "n": n, "rows": items })).with_table(header, rows))
}

fn labels_text(ls: &[Label]) -> String {
    ls.iter().map(|[x, y]| format!("{x}/{y}")).collect::<Vec<_>>().join(",")
}

pub fn oracle(path: &Path, ctx: &Context) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let fx: Fixture = text.parse()?;
    let (setting, _from_cache) = cache::setting(&fx, ctx)?;
    let outcomes = fx.run_on(&setting)?;
    let failure = outcomes.iter().find(|o| !o.passed()).map(|o| Failure {
        name: format!("count g={} a={} b={}", o.line.genus, labels_text(&o.line.a), labels_text(&o.line.b)),
        expected: o.line.expected.to_string(),
        actual: match &o.formula {
            Some(f) if *f != o.brute => format!("brute {}, formula {f}", o.brute),
            _ => o.brute.to_string(),
        },
    });
    let header = vec!["genus", "a", "b", "expected", "brute", "formula", "pass"];
    let rows = outcomes
        .iter()
        .map(|o| {
            vec![
                o.line.genus.to_string(),
                labels_text(&o.line.a),
                labels_text(&o.line.b),
                o.line.expected.to_string(),
                o.brute.to_string(),
                o.formula.as_ref().map_or(String::new(), ToString::to_string),
                o.passed().to_string(),
            ]
        })
        .collect();
    let items: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "genus": o.line.genus,
                "a": labels_text(&o.line.a),
                "b": labels_text(&o.line.b),
                "expected": o.line.expected.to_string(),
                "brute": o.brute.to_string(),
                "formula": o.formula.as_ref().map(ToString::to_string),
                "pass": o.passed(),
            })
        })
        .collect();
    let body = json!({ "group_order": setting.group().order(), "counts": items });
    Ok(Report::new("oracle", body).with_table(header, rows).with_failure(failure))
}
