pub mod args;
mod bounds;

use std::io::Read;
use std::path::PathBuf;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use args::*;
use dimlab::class::{self, Axis};
use dimlab::dimensions::{self, GraphDimWitness, OnlineDimWitness, SetShatterWitness, ThresholdWitness, TreeShatterWitness};
use dimlab::games::{self, AdversaryPolicy, LearnerPolicy};
use dimlab::generators::{self, GammaSequence};
use dimlab::io::{parse_index_list, parse_pairs, parse_rat_list, parse_tuples, DistributionFile, Ref, SampleFile};
use dimlab::loss::LossFunction;
use dimlab::pacsim::{self, TrialPlan};
use dimlab::trees::{self, BinaryTree, SpreadWitness};
use dimlab::width::{self, Norm, PointCloud};
use dimlab::{Error, HypothesisClass, MeasurableFamily, MonotoneMap, Rat, Result};

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
}

/// Tracks every input read so the manifest can record its digest.
#[derive(Default)]
pub struct Ctx {
    pub inputs: Vec<InputDigest>,
    pub extra_outputs: Vec<PathBuf>,
    stdin: Option<Vec<u8>>,
}

impl Ctx {
    fn read(&mut self, path: &str) -> Result<Vec<u8>> {
        let bytes = if path == "-" {
            if self.stdin.is_none() {
                let mut buf = vec![];
                std::io::stdin().read_to_end(&mut buf)?;
                self.stdin = Some(buf);
            }
            self.stdin.clone().unwrap()
        } else {
            std::fs::read(path).map_err(|e| Error::Io(format!("{path}: {e}")))?
        };
        self.inputs.push(InputDigest { path: path.to_string(), sha256: hex::encode(Sha256::digest(&bytes)), bytes: bytes.len() });
        Ok(bytes)
    }

    fn json<T: DeserializeOwned>(&mut self, path: &str) -> Result<T> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes).map_err(|e| Error::Parse(format!("{path}: {e}")))
    }

    fn class(&mut self, path: &str) -> Result<HypothesisClass> {
        self.json(path)
    }

    /// A point cloud file `{"points": [...]}`, or a class restricted to `xs`.
    fn cloud(&mut self, path: &str, xs: Option<&str>) -> Result<PointCloud> {
        let v: Value = self.json(path)?;
        if v.get("values").is_some() {
            let h: HypothesisClass = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
            let xs = match xs {
                Some(s) => parse_index_list(s)?,
                None => (0..h.n_x()).collect(),
            };
            return PointCloud::from_class(&h, &xs);
        }
        #[derive(Deserialize)]
        struct CloudFile {
            points: Vec<Vec<Rat>>,
        }
        let f: CloudFile = serde_json::from_value(v).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        PointCloud::new(f.points)
    }

    fn write_csv(&mut self, path: &PathBuf, body: &str) -> Result<()> {
        std::fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.extra_outputs.push(path.clone());
        Ok(())
    }
}

pub enum Output {
    Json(Value),
    Text(String),
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn rat(s: &str) -> Result<Rat> {
    s.trim().parse()
}

fn opt_rat(s: &Option<String>, name: &str) -> Result<Rat> {
    match s {
        Some(v) => rat(v),
        None => Err(Error::Parse(format!("--{name} is required"))),
    }
}

fn loss(s: &str) -> Result<LossFunction> {
    s.parse()
}

/// Order-preserving parallel map over independent items.
pub fn par_map<T: Sync, U: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> U + Sync) -> Vec<U> {
    if jobs <= 1 || items.len() <= 1 {
        return items.iter().map(&f).collect();
    }
    let chunk = items.len().div_ceil(jobs);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<U>>())).collect();
        handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect()
    })
}

pub fn run(cli: &Cli, ctx: &mut Ctx) -> Result<Output> {
    match &cli.cmd {
        Command::Gen(g) => gen(g).map(|h| Output::Json(to_json(&h))),
        Command::Derive(d) => derive(d, ctx).map(|h| Output::Json(to_json(&h))),
        Command::Dim(a) => dim(a, ctx).map(Output::Json),
        Command::Width(w) => width_cmd(w, cli, ctx).map(Output::Json),
        Command::Bounds(b) => {
            let sweep = bounds::run(&b.name, &b.params, cli.jobs)?;
            Ok(match cli.format {
                Format::Csv => Output::Text(bounds::to_csv(&sweep)),
                Format::Json if sweep.reports.len() == 1 => Output::Json(to_json(&sweep.reports[0])),
                Format::Json => Output::Json(json!({"swept": sweep.swept, "reports": sweep.reports})),
            })
        }
        Command::Game(g) => game(g, cli, ctx).map(Output::Json),
        Command::Pac(p) => pac(p, cli, ctx),
        Command::Convert(c) => convert(c, ctx).map(Output::Json),
        Command::Verify(v) => verify(v, ctx).map(Output::Json),
    }
}

fn gen(g: &Gen) -> Result<HypothesisClass> {
    match g {
        Gen::Powerset { n } => generators::powerset_class(*n),
        Gen::Threshold { n } => generators::threshold_class(*n),
        Gen::Interval { n } => generators::interval_class(*n),
        Gen::Rectangle { w, h } => generators::rectangle_class(*w, *h),
        Gen::EvenInterval { n } => generators::even_interval_class(*n),
        Gen::H0 { k } => generators::h0_class(*k),
        Gen::H0TwoChoice { k } => generators::h0_two_choice_class(*k),
        Gen::Tree { d, gammas } => generators::tree_class(&GammaSequence::new(parse_rat_list(gammas)?)?, *d),
        Gen::RationalFn { coeffs, xs, deg_p, deg_q } => {
            generators::rational_fn_class(&parse_rat_list(coeffs)?, &parse_rat_list(xs)?, *deg_p, *deg_q)
        }
    }
}

fn derive(d: &Derive, ctx: &mut Ctx) -> Result<HypothesisClass> {
    match d {
        Derive::Dual { class } => Ok(class::dual(&ctx.class(class)?)),
        Derive::Compose { class, map } => {
            let h = ctx.class(class)?;
            let f = MonotoneMap::new(parse_pairs(map, rat, rat)?)?;
            Ok(class::compose_monotone(&h, &f))
        }
        Derive::Distribution { class, dists } => {
            let h = ctx.class(class)?;
            let files: Vec<DistributionFile> = ctx.json(dists)?;
            let mus = files.iter().map(|f| f.resolve(&h, Axis::Y)).collect::<Result<Vec<_>>>()?;
            class::distribution_class(&h, &mus)
        }
        Derive::DualDistribution { class, dists } => {
            let h = ctx.class(class)?;
            let files: Vec<DistributionFile> = ctx.json(dists)?;
            let nus = files.iter().map(|f| f.resolve(&h, Axis::X)).collect::<Result<Vec<_>>>()?;
            class::dual_distribution_class(&h, &nus)
        }
        Derive::Expectation { family } => {
            #[derive(Deserialize)]
            struct FamilyFile {
                weights: Vec<Rat>,
                classes: Vec<HypothesisClass>,
            }
            let f: FamilyFile = ctx.json(family)?;
            Ok(class::expectation_class(&MeasurableFamily::new(f.weights, f.classes)?))
        }
        Derive::Avg { class, tuples } => class::avg_class(&ctx.class(class)?, &parse_tuples(tuples)?),
        Derive::TwoChoice { class, lambdas, pairs } => {
            let h = ctx.class(class)?;
            let idx = |s: &str| s.parse::<usize>().map_err(|e| Error::Parse(format!("{s:?}: {e}")));
            class::two_choice_class(&h, &parse_rat_list(lambdas)?, &parse_pairs(pairs, idx, idx)?)
        }
        Derive::RestrictX { class, keep } => ctx.class(class)?.restrict_x(&parse_index_list(keep)?),
        Derive::RestrictY { class, keep } => ctx.class(class)?.restrict_y(&parse_index_list(keep)?),
    }
}

fn dim(a: &DimArgs, ctx: &mut Ctx) -> Result<Value> {
    let h = ctx.class(&a.class)?;
    Ok(match a.kind {
        DimKind::Vc => {
            let (d, w) = dimensions::vc_dim(&h)?;
            json!({"kind": "vc", "dim": d, "witness": w})
        }
        DimKind::Littlestone => {
            let (d, w) = dimensions::littlestone_dim(&h)?;
            json!({"kind": "littlestone", "dim": d, "witness": w})
        }
        DimKind::Fat => {
            let g = opt_rat(&a.gamma, "gamma")?;
            let (d, w) = dimensions::fat_dim(&h, g)?;
            json!({"kind": "fat", "gamma": g, "dim": d, "witness": w})
        }
        DimKind::SeqFat => {
            let g = opt_rat(&a.gamma, "gamma")?;
            let (d, w) = dimensions::seq_fat_dim(&h, g)?;
            json!({"kind": "seq_fat", "gamma": g, "dim": d, "witness": w})
        }
        DimKind::Graph => {
            let g = match &a.gamma {
                Some(s) => rat(s)?,
                None => Rat::new(1, 8),
            };
            let (d, w) = dimensions::graph_dim(&h, g)?;
            json!({"kind": "graph", "gamma": g, "dim": d, "witness": w})
        }
        DimKind::Threshold => match (&a.gamma, &a.r, &a.s) {
            (Some(g), None, None) => {
                let (d, w) = dimensions::threshold_dim_gamma(&h, rat(g)?)?;
                json!({"kind": "threshold", "dim": d, "witness": w})
            }
            (None, Some(r), Some(s)) => {
                let (d, w) = dimensions::threshold_dim_rs(&h, rat(r)?, rat(s)?)?;
                json!({"kind": "threshold", "dim": d, "witness": w})
            }
            _ => return Err(Error::Parse("threshold needs either --gamma or both --r and --s".into())),
        },
        DimKind::Online => {
            let l = loss(&a.loss)?;
            let (d, w) = dimensions::online_dim(&h, l)?;
            json!({"kind": "online", "loss": l, "dim": d, "witness": w})
        }
    })
}

fn width_cmd(w: &Width, cli: &Cli, ctx: &mut Ctx) -> Result<Value> {
    Ok(match w {
        Width::Rademacher { input, xs } => {
            let a = ctx.cloud(input, xs.as_deref())?;
            json!({"rademacher_mean_width": width::rademacher_mean_width(&a)?, "points": a.points().len(), "dim": a.dim()})
        }
        Width::ClassRademacher { class, n, trials } => {
            let h = ctx.class(class)?;
            let mode = match trials {
                Some(t) => width::Mode::Sampled { trials: *t, seed: cli.seed },
                None => width::Mode::Exhaustive,
            };
            let (v, arg) = width::class_rademacher(&h, *n, mode)?;
            json!({"value": v, "argmax": arg, "n": n, "mode": mode})
        }
        Width::SeqRademacher { class, n } => {
            let h = ctx.class(class)?;
            let (v, tree) = width::seq_class_rademacher(&h, *n, width::Mode::Exhaustive)?;
            json!({"value": v, "tree": tree, "n": n})
        }
        Width::SeqTree { class, tree } => {
            let h = ctx.class(class)?;
            let t: BinaryTree<usize> = ctx.json(tree)?;
            if t.nodes().iter().any(|&x| x >= h.n_x()) {
                return Err(Error::IndexError("tree point out of range".into()));
            }
            json!({"value": width::seq_tree_width(&h, &t), "depth": t.depth()})
        }
        Width::Gaussian { input, xs, trials } => {
            let a = ctx.cloud(input, xs.as_deref())?;
            let (m, se) = width::gaussian_mean_width(&a, *trials, cli.seed);
            json!({"mean": m, "stderr": se, "interval": [m - 3.0 * se, m + 3.0 * se], "trials": trials, "seed": cli.seed})
        }
        Width::Cover { input, xs, gamma, norm } => {
            let a = ctx.cloud(input, xs.as_deref())?;
            let n = match norm {
                NormArg::L2 => Norm::L2,
                NormArg::Linf => Norm::LInf,
            };
            let c = width::covering_number(&a, rat(gamma)?, n);
            json!({"gamma": rat(gamma)?, "norm": n, "size": c.size, "exact": c.exact, "centers": c.centers})
        }
    })
}

fn grid_opt(s: &Option<String>) -> Result<Option<Vec<Rat>>> {
    s.as_deref().map(parse_rat_list).transpose()
}

fn game(g: &Game, cli: &Cli, ctx: &mut Ctx) -> Result<Value> {
    match g {
        Game::Realizable(c) => {
            let h = ctx.class(&c.class)?;
            let l = loss(&c.loss)?;
            let grid = grid_opt(&c.grid)?;
            let v = games::realizable_value(&h, l, c.t, grid.as_deref())?;
            let mut out = to_json(&v);
            out["loss"] = to_json(&l);
            Ok(out)
        }
        Game::Agnostic { common: c, labels } => {
            let h = ctx.class(&c.class)?;
            let l = loss(&c.loss)?;
            let grid = grid_opt(&c.grid)?;
            let labels = grid_opt(labels)?;
            let v = games::agnostic_minimax(&h, l, c.t, grid.as_deref(), labels.as_deref(), cli.max_states)?;
            let mut out = to_json(&v);
            out["loss"] = to_json(&l);
            Ok(out)
        }
        Game::Simulate { common: c, learner, adversary } => {
            let h = ctx.class(&c.class)?;
            let l = loss(&c.loss)?;
            let grid = grid_opt(&c.grid)?;
            let adv = if adversary == "worst" {
                AdversaryPolicy::WorstCaseExtract
            } else if let Some(h0) = adversary.strip_prefix("consistent:") {
                let r: Ref = match h0.parse::<usize>() {
                    Ok(i) => Ref::Index(i),
                    Err(_) => Ref::Label(h0.to_string()),
                };
                AdversaryPolicy::Consistent { h0: r.resolve(&h, Axis::Y).map_err(|e| Error::PolicyError(e.to_string()))? }
            } else if let Some(path) = adversary.strip_prefix("scripted:") {
                let raw: Vec<(Ref, Rat)> = ctx.json(path)?;
                let rounds = raw.iter().map(|(x, y)| Ok((x.resolve(&h, Axis::X)?, *y))).collect::<Result<_>>()?;
                AdversaryPolicy::Scripted { rounds }
            } else {
                return Err(Error::PolicyError(format!("unknown adversary {adversary:?}")));
            };
            let lp = match learner {
                LearnerArg::Ftl => LearnerPolicy::FollowTheLeader,
                LearnerArg::Minimax => LearnerPolicy::MinimaxExtract,
            };
            let tr = games::run_game(&h, l, lp, &adv, c.t, cli.seed, grid.as_deref())?;
            Ok(json!({
                "loss": l,
                "learner": lp,
                "adversary": adv,
                "seed": cli.seed,
                "transcript": tr,
                "learner_loss": tr.learner_loss(l),
                "regret": games::regret(&tr, &h, l)?,
            }))
        }
        Game::PlayZero(c) => {
            let h = ctx.class(&c.class)?;
            let l = loss(&c.loss)?;
            let v = games::play_zero_value(&h, l, c.t)?;
            Ok(json!({"loss": l, "T": c.t, "value": v}))
        }
    }
}

fn sizes(s: &str) -> Result<Vec<usize>> {
    parse_index_list(s)
}

fn stat_csv(key: &str, rows: &[(usize, pacsim::StatReport)]) -> String {
    let mut out = format!("{key},fraction,hits,trials,sigma,lo,hi\n");
    for (k, r) in rows {
        out += &format!("{k},{},{},{},{},{},{}\n", r.fraction, r.hits, r.trials, r.sigma, r.interval.0, r.interval.1);
    }
    out
}

fn pac(p: &Pac, cli: &Cli, ctx: &mut Ctx) -> Result<Output> {
    let (json, csv, path) = match p {
        Pac::Gc { class, dist, m, eps, trials, csv } => {
            let h = ctx.class(class)?;
            let df: DistributionFile = ctx.json(dist)?;
            let d = df.resolve(&h, Axis::X)?;
            let plan = TrialPlan::new(*trials, cli.seed).jobs(cli.jobs);
            let e = rat(eps)?;
            let rows = sizes(m)?.into_iter().map(|m| Ok((m, pacsim::gc_estimate(&h, &d, m, e, &plan)?))).collect::<Result<Vec<_>>>()?;
            let j = json!({"eps": e, "seed": cli.seed, "evidence_only": true, "rows": rows.iter().map(|(m, r)| json!({"m": m, "report": r})).collect::<Vec<_>>()});
            (j, stat_csv("m", &rows), csv)
        }
        Pac::Trial { class, sample, n, eps, trials, csv } => {
            let h = ctx.class(class)?;
            let sf: SampleFile = ctx.json(sample)?;
            let pd = sf.resolve(&h)?;
            let plan = TrialPlan::new(*trials, cli.seed).jobs(cli.jobs);
            let e = rat(eps)?;
            let rows = sizes(n)?.into_iter().map(|n| Ok((n, pacsim::pac_trial(&h, &pd, n, e, &plan)?))).collect::<Result<Vec<_>>>()?;
            let j = json!({"eps": e, "seed": cli.seed, "evidence_only": true, "rows": rows.iter().map(|(n, r)| json!({"n": n, "report": r})).collect::<Vec<_>>()});
            (j, stat_csv("n", &rows), csv)
        }
        Pac::Selectivity { base, hidden, candidates, n, trials, csv } => {
            let h = ctx.class(base)?;
            let hf: DistributionFile = ctx.json(hidden)?;
            let mu = hf.resolve(&h, Axis::X)?;
            let cf: Vec<DistributionFile> = ctx.json(candidates)?;
            let cands = cf.iter().map(|f| f.resolve(&h, Axis::X)).collect::<Result<Vec<_>>>()?;
            let plan = TrialPlan::new(*trials, cli.seed).jobs(cli.jobs);
            let reports = sizes(n)?.into_iter().map(|n| pacsim::selectivity_demo(&h, &mu, &cands, n, &plan)).collect::<Result<Vec<_>>>()?;
            let mut body = "n,mean_excess,median_excess,sigma,best_loss\n".to_string();
            for r in &reports {
                body += &format!("{},{},{},{},{}\n", r.n, r.mean_excess, r.median_excess, r.sigma, r.best_loss);
            }
            (json!({"seed": cli.seed, "evidence_only": true, "reports": reports}), body, csv)
        }
    };
    if let Some(path) = path {
        ctx.write_csv(path, &csv)?;
    }
    Ok(match cli.format {
        Format::Csv => Output::Text(csv),
        Format::Json => Output::Json(json),
    })
}

/// Accepts either a bare witness or a `dim` output carrying one.
fn witness_value(v: Value) -> Value {
    match v {
        Value::Object(mut m) if m.contains_key("witness") => m.remove("witness").unwrap(),
        other => other,
    }
}

fn parse_witness<T: DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(witness_value(v)).map_err(|e| Error::BadWitness(e.to_string()))
}

fn convert(c: &Convert, ctx: &mut Ctx) -> Result<Value> {
    Ok(match c {
        Convert::TreeFromRs { class, witness } => {
            let h = ctx.class(class)?;
            let w: ThresholdWitness = parse_witness(ctx.json(witness)?)?;
            to_json(&trees::tree_from_rs_threshold(&h, &w)?)
        }
        Convert::GammaFromTree { class, witness, delta, k, d } => {
            let h = ctx.class(class)?;
            let w: TreeShatterWitness = parse_witness(ctx.json(witness)?)?;
            to_json(&trees::gamma_threshold_from_tree(&h, &w, w.gamma, rat(delta)?, *k, *d)?)
        }
        Convert::GammaFromSpread { class, witness, delta, k, d } => {
            let h = ctx.class(class)?;
            let w: SpreadWitness = parse_witness(ctx.json(witness)?)?;
            to_json(&trees::gamma_threshold_from_spread(&h, &w, rat(delta)?, *k, *d)?)
        }
        Convert::RsFromGamma { class, witness, delta } => {
            let h = ctx.class(class)?;
            let w: ThresholdWitness = parse_witness(ctx.json(witness)?)?;
            to_json(&trees::rs_from_gamma(&h, &w, rat(delta)?)?)
        }
        Convert::ToSpread { witness } => {
            let w: TreeShatterWitness = parse_witness(ctx.json(witness)?)?;
            to_json(&SpreadWitness::from(&w))
        }
        Convert::Ramsey { tree, depths } => {
            let t: BinaryTree<usize> = ctx.json(tree)?;
            let (color, emb) = trees::monochromatic_subtree(&t, &parse_index_list(depths)?)?;
            json!({"color": color, "embedding": emb})
        }
        Convert::OnesSubtree { tree, want } => {
            let t: BinaryTree<bool> = ctx.json(tree)?;
            to_json(&trees::ones_subtree(&t, *want)?)
        }
    })
}

fn verify(a: &VerifyArgs, ctx: &mut Ctx) -> Result<Value> {
    let h = ctx.class(&a.class)?;
    let raw: Value = ctx.json(&a.witness)?;
    let outer_loss = raw.get("loss").cloned();
    let gamma = a.gamma.as_deref().map(rat).transpose()?;
    let valid = match a.kind {
        VerifyKind::Set => {
            let w: SetShatterWitness = parse_witness(raw)?;
            trees::verify_set_shatter(&h, &w, gamma.unwrap_or(w.gamma))?
        }
        VerifyKind::Graph => {
            let mut w: GraphDimWitness = parse_witness(raw)?;
            if let Some(g) = gamma {
                w.gamma = g;
            }
            trees::verify_graph_witness(&h, &w)?
        }
        VerifyKind::Seq => {
            let w: TreeShatterWitness = parse_witness(raw)?;
            trees::verify_seq_shatter(&h, &w, gamma.unwrap_or(w.gamma))?
        }
        VerifyKind::Threshold => trees::verify_threshold(&h, &parse_witness::<ThresholdWitness>(raw)?)?,
        VerifyKind::Online => {
            let l = match (&a.loss, outer_loss) {
                (Some(s), _) => loss(s)?,
                (None, Some(v)) => serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?,
                (None, None) => LossFunction::Identity,
            };
            let w: OnlineDimWitness = parse_witness(raw)?;
            trees::verify_online_value(&h, &w, l)?
        }
        VerifyKind::Spread => {
            let w: SpreadWitness = parse_witness(raw)?;
            trees::verify_spread_shatter(&h, &w.nodes, &w.labels, gamma.unwrap_or(w.eps))?
        }
    };
    Ok(json!({"kind": format!("{:?}", a.kind).to_lowercase(), "valid": valid}))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_map_keeps_order() {
        let items: Vec<u64> = (0..103).collect();
        for jobs in [1, 2, 7, 200] {
            assert_eq!(par_map(&items, jobs, |x| x * x), items.iter().map(|x| x * x).collect::<Vec<_>>());
        }
    }

    #[test]
    fn witness_may_be_wrapped() {
        let bare = json!({"gamma": "1/2"});
        assert_eq!(witness_value(json!({"dim": 1, "witness": bare.clone()})), bare);
        assert_eq!(witness_value(bare.clone()), bare);
    }
}
