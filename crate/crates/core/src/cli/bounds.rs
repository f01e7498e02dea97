//! `dimlab bounds NAME key=value ...`: evaluation and grid sweeps.

use std::collections::BTreeMap;

use dimlab::bounds::*;
use dimlab::io::parse_pairs;
use dimlab::{Error, Rat, Result};

type Eval = fn(&Params) -> Result<BoundReport>;

struct BoundDef {
    name: &'static str,
    keys: &'static [(&'static str, Option<&'static str>)],
    eval: Eval,
}

/// Keys holding text rather than a sweepable number.
const TEXT_KEYS: &[&str] = &["kind", "variant", "table", "grid"];

pub struct Params(BTreeMap<String, String>);

impl Params {
    fn text(&self, k: &str) -> &str {
        self.0.get(k).map(String::as_str).unwrap_or("")
    }

    fn num(&self, k: &str) -> Result<f64> {
        parse_num(self.text(k))
    }

    fn numeric(&self, keys: &[&str]) -> Result<Vec<(String, f64)>> {
        keys.iter().map(|k| Ok((k.to_string(), self.num(k)?))).collect()
    }
}

fn parse_num(s: &str) -> Result<f64> {
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    s.parse::<Rat>().map(|r| r.to_f64()).map_err(|_| Error::Parse(format!("not a number: {s:?}")))
}

fn report(name: &str, p: &Params, keys: &[&str], value: f64, formula: &str) -> Result<BoundReport> {
    let inputs = p.numeric(keys)?;
    let refs: Vec<(&str, f64)> = inputs.iter().map(|(k, v)| (k.as_str(), *v)).collect();
    BoundReport::new(name, &refs, value, formula)
}

fn kind(p: &Params) -> Result<ClassKind> {
    match p.text("kind") {
        "real" => Ok(ClassKind::Real),
        "concept" => Ok(ClassKind::Concept),
        k => Err(Error::Parse(format!("kind must be real or concept, got {k:?}"))),
    }
}

fn variant(p: &Params) -> Result<JVariant> {
    match p.text("variant") {
        "linear" => Ok(JVariant::Linear),
        "quadratic" => Ok(JVariant::Quadratic),
        v => Err(Error::Parse(format!("variant must be linear or quadratic, got {v:?}"))),
    }
}

fn with_stages(mut r: BoundReport, stages: &[(&str, f64)]) -> BoundReport {
    r.stages = stages.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    r
}

const BOUNDS: &[BoundDef] = &[
    BoundDef {
        name: "fat-pac",
        keys: &[("dim", None), ("eps", None), ("delta", None), ("c", Some("1"))],
        eval: |p| {
            let v = fat_pac_bound(p.num("dim")?, p.num("eps")?, p.num("delta")?, p.num("c")?)?;
            report("fat_pac", p, &["dim", "eps", "delta", "c"], v, "c (1/eps^2)(dim ln^2(1/eps) + ln(1/delta))")
        },
    },
    BoundDef {
        name: "expectation-pac",
        keys: &[("d", None), ("eps", None), ("delta", None), ("kind", Some("real")), ("c", Some("1"))],
        eval: |p| {
            let k = kind(p)?;
            let v = expectation_pac_bound(p.num("d")?, p.num("eps")?, p.num("delta")?, k, p.num("c")?)?;
            let f = match k {
                ClassKind::Real => "c (d/eps^4 ln^2(d/eps) + (1/eps^2) ln(1/delta))",
                ClassKind::Concept => "c (1/eps^2)(d ln(d/eps) + ln(1/delta))",
            };
            report(&format!("expectation_pac_{}", p.text("kind")), p, &["d", "eps", "delta", "c"], v, f)
        },
    },
    BoundDef {
        name: "gc-rademacher",
        keys: &[("n", None), ("rn", None), ("delta", None)],
        eval: |p| {
            let (e, c) = gc_rademacher_bound(p.num("n")?, p.num("rn")?, p.num("delta")?)?;
            let r = report("gc_rademacher", p, &["n", "rn", "delta"], e, "eps = 2 R_n/n + delta, conf = exp(-n delta^2/2)")?;
            Ok(with_stages(r, &[("eps_out", e), ("conf_out", c)]))
        },
    },
    BoundDef {
        name: "gc-expectation",
        keys: &[("N", None), ("eps", None), ("delta", None)],
        eval: |p| {
            let v = gc_expectation_bound(p.num("N")?, p.num("eps")?, p.num("delta")?)?;
            report("gc_expectation", p, &["N", "eps", "delta"], v, "N + (8/eps^2) ln(1/delta)")
        },
    },
    BoundDef {
        name: "vc-rademacher",
        keys: &[("d", None), ("n", None)],
        eval: |p| {
            let v = vc_rademacher(p.num("d")?, p.num("n")?)?;
            report("vc_rademacher", p, &["d", "n"], v, "2 sqrt(d n ln(n+1))")
        },
    },
    BoundDef {
        name: "covering-fat",
        keys: &[("d", None), ("gamma", None), ("n", None)],
        eval: |p| {
            let (d, g, n) = (p.num("d")?, p.num("gamma")?, p.num("n")?);
            let v = covering_fat_bound(d, g, n)?;
            let r = report("covering_fat", p, &["d", "gamma", "n"], v, "2 (4n/gamma^2)^(d ln(2en/(d gamma)))")?;
            Ok(with_stages(r, &[("ln_value", ln_covering_fat_bound(d, g, n)?)]))
        },
    },
    BoundDef {
        name: "covering-fat-ln",
        keys: &[("d", None), ("gamma", None), ("n", None)],
        eval: |p| {
            let v = ln_covering_fat_bound(p.num("d")?, p.num("gamma")?, p.num("n")?)?;
            report("covering_fat_ln", p, &["d", "gamma", "n"], v, "ln 2 + d ln(2en/(d gamma)) ln(4n/gamma^2)")
        },
    },
    BoundDef {
        name: "regret",
        keys: &[("table", None), ("T", None), ("grid", Some(""))],
        eval: |p| {
            let table = parse_pairs(p.text("table"), parse_num, parse_num)?;
            let grid: Vec<f64> = p.text("grid").split(',').filter(|s| !s.is_empty()).map(parse_num).collect::<Result<_>>()?;
            let (lo, up) = regret_bounds(&table, p.num("T")?, &grid)?;
            let r = report(
                "regret",
                p,
                &["T"],
                up,
                "lower (1/(4 sqrt 2)) max min(sqrt(dT), T); upper min_gamma 4 gamma T + 12 sqrt(T) int_gamma^1 sqrt(d(b) ln(2eT/b)) db",
            )?;
            Ok(with_stages(r, &[("lower", lo), ("upper", up)]))
        },
    },
    BoundDef {
        name: "expectation-regret",
        keys: &[("d", None), ("gamma", None), ("n", None)],
        eval: |p| {
            let v = expectation_regret_bound(p.num("d")?, p.num("gamma")?, p.num("n")?)?;
            report("expectation_regret", p, &["d", "gamma", "n"], v, "4 gamma n + 12 (1-gamma) sqrt(d n ln(2en/gamma))")
        },
    },
    BoundDef {
        name: "littlestone-regret",
        keys: &[("d", None), ("T", None), ("c", Some("1"))],
        eval: |p| {
            let v = littlestone_regret(p.num("d")?, p.num("T")?, p.num("c")?);
            report("littlestone_regret", p, &["d", "T", "c"], v, "c sqrt(d T)")
        },
    },
    BoundDef {
        name: "aggregation-j",
        keys: &[("m", None), ("dstar", None), ("variant", Some("linear"))],
        eval: |p| {
            let v = aggregation_j(p.num("m")?, p.num("dstar")?, variant(p)?)?;
            report(&format!("aggregation_j_{}", p.text("variant")), p, &["m", "dstar"], v, "25 m^p d* (ln 90 + ln m + ln d*)^2")
        },
    },
    BoundDef {
        name: "dual-dist-chain",
        keys: &[
            ("d", None),
            ("dstar", None),
            ("gamma", None),
            ("lprime", Some("1")),
            ("delta", Some("0.05")),
            ("variant", Some("linear")),
        ],
        eval: |p| dual_dist_chain(p.num("d")?, p.num("dstar")?, p.num("gamma")?, p.num("lprime")?, p.num("delta")?, variant(p)?),
    },
    BoundDef {
        name: "sigmod",
        keys: &[("lambda", None), ("eps", None)],
        eval: |p| {
            let v = sigmod_baseline(p.num("lambda")?, p.num("eps")?)?;
            report("sigmod_baseline", p, &["lambda", "eps"], v, "eps^-(lambda+1)")
        },
    },
];

pub fn names() -> Vec<&'static str> {
    BOUNDS.iter().map(|s| s.name).collect()
}

/// Expands comma lists of numeric keys into the grid of single-valued
/// parameter sets, in key order with the last key varying fastest.
fn expand(def: &BoundDef, given: &BTreeMap<String, String>) -> Result<(Vec<String>, Vec<Params>)> {
    let mut axes: Vec<(String, Vec<String>)> = vec![];
    for (k, default) in def.keys {
        let v = match (given.get(*k), default) {
            (Some(v), _) => v.clone(),
            (None, Some(d)) => d.to_string(),
            (None, None) => return Err(Error::Parse(format!("{}: missing {k}=...", def.name))),
        };
        let vals = if TEXT_KEYS.contains(k) { vec![v] } else { v.split(',').map(|s| s.trim().to_string()).collect() };
        axes.push((k.to_string(), vals));
    }
    let swept: Vec<String> = axes.iter().filter(|a| a.1.len() > 1).map(|a| a.0.clone()).collect();
    let mut grid: Vec<BTreeMap<String, String>> = vec![BTreeMap::new()];
    for (k, vals) in &axes {
        grid = grid
            .into_iter()
            .flat_map(|m| {
                vals.iter().map(move |v| {
                    let mut m = m.clone();
                    m.insert(k.clone(), v.clone());
                    m
                })
            })
            .collect();
    }
    Ok((swept, grid.into_iter().map(Params).collect()))
}

pub struct Sweep {
    pub swept: Vec<String>,
    pub reports: Vec<BoundReport>,
}

pub fn run(name: &str, params: &[String], jobs: usize) -> Result<Sweep> {
    let def = BOUNDS
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Parse(format!("unknown bound {name:?}; known: {}", names().join(", "))))?;
    let mut given = BTreeMap::new();
    for p in params {
        let (k, v) = p.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {p:?}")))?;
        if !def.keys.iter().any(|(key, _)| *key == k) {
            return Err(Error::Parse(format!("{name}: unknown key {k:?}")));
        }
        given.insert(k.to_string(), v.to_string());
    }
    let (swept, grid) = expand(def, &given)?;
    let reports = super::par_map(&grid, jobs, |p| (def.eval)(p)).into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Sweep { swept, reports })
}

pub fn to_csv(s: &Sweep) -> String {
    let mut cols: Vec<String> = s.reports.first().map(|r| r.inputs.keys().cloned().collect()).unwrap_or_default();
    cols.push("value".into());
    let stage_names: Vec<String> = s.reports.first().map(|r| r.stages.iter().map(|x| x.0.clone()).collect()).unwrap_or_default();
    cols.extend(stage_names.iter().cloned());
    let mut out = cols.join(",") + "\n";
    for r in &s.reports {
        let mut row: Vec<String> = r.inputs.values().map(|v| v.to_string()).collect();
        row.push(r.value.to_string());
        row.extend(r.stages.iter().map(|x| x.1.to_string()));
        out += &(row.join(",") + "\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn every_name_evaluates_with_defaults_filled() {
        let cases: &[(&str, &[&str])] = &[
            ("fat-pac", &["dim=2", "eps=0.1", "delta=0.05"]),
            ("expectation-pac", &["d=2", "eps=0.1", "delta=0.05"]),
            ("gc-rademacher", &["n=200", "rn=0", "delta=0.1"]),
            ("gc-expectation", &["N=100", "eps=0.1", "delta=0.01"]),
            ("vc-rademacher", &["d=1", "n=3"]),
            ("covering-fat", &["d=1", "gamma=1/2", "n=3"]),
            ("regret", &["table=1/2:1", "T=100"]),
            ("expectation-regret", &["d=1", "gamma=1/2", "n=8"]),
            ("littlestone-regret", &["d=4", "T=9"]),
            ("aggregation-j", &["m=1", "dstar=1"]),
            ("dual-dist-chain", &["d=1", "dstar=1", "gamma=1/2"]),
            ("sigmod", &["lambda=1", "eps=0.1"]),
        ];
        for (name, a) in cases {
            let s = run(name, &args(a), 1).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.reports.len(), 1, "{name}");
        }
        let s = run("sigmod", &args(&["lambda=1", "eps=0.1"]), 1).unwrap();
        assert!((s.reports[0].value - 100.0).abs() < 1e-9);
    }

    #[test]
    fn comma_lists_sweep_a_cartesian_grid() {
        let s = run("littlestone-regret", &args(&["d=1,4", "T=1,9,16"]), 3).unwrap();
        assert_eq!(s.swept, vec!["d".to_string(), "T".to_string()]);
        assert_eq!(s.reports.len(), 6);
        let csv = to_csv(&s);
        assert_eq!(csv.lines().count(), 7);
        let header = csv.lines().next().unwrap();
        assert!(header.contains("value") && header.contains('d') && header.contains('T'), "{header}");
    }

    #[test]
    fn bad_keys_and_missing_keys() {
        assert!(run("sigmod", &args(&["lambda=1"]), 1).is_err());
        assert!(run("sigmod", &args(&["lambda=1", "eps=0.1", "zeta=2"]), 1).is_err());
        assert!(run("sigmod", &args(&["lambda=x", "eps=0.1"]), 1).is_err());
    }
}
