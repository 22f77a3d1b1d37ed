use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use fixtree::excursion::{evaluate_grid, sample_height_perpetuity, time_change, ParameterTree};
use fixtree::fractal::estimate_dimension;
use fixtree::lamination::{geometric_checkpoints, run_batch, LaminationModel};
use fixtree::rng::replica_seed;
use fixtree::structural::{
    degree_set, index_functional, index_functional_mc, predict_degree_set, simulate_exit_chain, solve_alpha,
    DecompositionSpec,
};
use fixtree::treemetric::{ks_two_sample, sample_distance_matrix, DistanceOracle};

use crate::config::{Config, ConfigError};
use crate::Command;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] fixtree::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
}

type Out = Box<dyn Write>;

/// `<dir>/<command>.csv` (`.json` for degrees), or standard output.
fn open(out: Option<&Path>, cmd: Command) -> io::Result<Out> {
    Ok(match out {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let ext = if cmd == Command::Degrees { "json" } else { "csv" };
            Box::new(BufWriter::new(File::create(dir.join(format!("{}.{ext}", cmd.name())))?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn header(w: &mut Out, cmd: Command, cfg: &Config) -> io::Result<()> {
    writeln!(w, "# fixtree {} {}", env!("CARGO_PKG_VERSION"), cmd.name())?;
    writeln!(w, "# config_hash={} seed={}", cfg.hash(), cfg.seed)
}

pub fn run(cmd: Command, cfg: &Config, out: Option<&Path>) -> Result<(), RunError> {
    let spec = cfg.spec()?;
    let mut w = open(out, cmd)?;
    if cmd != Command::Degrees {
        header(&mut w, cmd, cfg)?;
    }
    match cmd {
        Command::Alpha => alpha(&mut w, cfg, &spec)?,
        Command::Excursion => excursion(&mut w, cfg, spec)?,
        Command::Dimension => dimension(&mut w, cfg, &spec)?,
        Command::Timechange => {
            let pt = ParameterTree::new(spec, cfg.seed);
            let tau = time_change(&pt, cfg.timechange.depth);
            let m = cfg.timechange.m;
            writeln!(w, "t,tau")?;
            for (k, v) in tau.grid(m).iter().enumerate() {
                writeln!(w, "{},{v}", k as f64 / m as f64)?;
            }
        }
        Command::Heights => heights(&mut w, cfg, &spec)?,
        Command::Lamination => lamination(&mut w, cfg)?,
        Command::Chain => {
            let traj = simulate_exit_chain(&spec.tree, &spec.law, cfg.chain.steps, cfg.seed);
            let zeros = traj[1..].iter().filter(|s| s.m == 0).count();
            writeln!(w, "# fraction_m_zero={}", zeros as f64 / cfg.chain.steps.max(1) as f64)?;
            writeln!(w, "step,m,log_mass")?;
            for (i, s) in traj.iter().enumerate() {
                writeln!(w, "{i},{},{}", s.m, s.log_mass)?;
            }
        }
        Command::Degrees => {
            let doc = json!({
                "version": env!("CARGO_PKG_VERSION"),
                "config_hash": cfg.hash(),
                "seed": cfg.seed,
                "structural_degrees": degree_set(&spec.tree),
                "predicted": predict_degree_set(&spec.tree),
            });
            writeln!(w, "{}", serde_json::to_string_pretty(&doc).expect("json"))?;
        }
    }
    w.flush()?;
    Ok(())
}

fn alpha(w: &mut Out, cfg: &Config, spec: &DecompositionSpec) -> Result<(), RunError> {
    let sol = solve_alpha(&spec.tree, &spec.law, cfg.solver.tol)?;
    writeln!(
        w,
        "# alpha={} bracket=[{},{}] mc_half_width={} m_star={}",
        sol.alpha, sol.bracket.0, sol.bracket.1, sol.mc_half_width, spec.m_star
    )?;
    eprintln!("alpha = {}", sol.alpha);
    writeln!(w, "a,F,se")?;
    let n = cfg.solver.curve_points;
    for i in 1..=n {
        let a = i as f64 / (n + 1) as f64;
        let (f, se) = match index_functional(&spec.tree, &spec.law, a) {
            Some(f) => (f, 0.0),
            None => index_functional_mc(&spec.tree, &spec.law, a, cfg.solver.curve_samples, cfg.seed),
        };
        writeln!(w, "{a},{f},{se}")?;
    }
    Ok(())
}

fn excursion(w: &mut Out, cfg: &Config, spec: DecompositionSpec) -> Result<(), RunError> {
    let c = spec.c;
    let e = &cfg.excursion;
    let pt = ParameterTree::new(spec, cfg.seed).with_base(e.base);
    let g = evaluate_grid(&pt, e.depth, e.m);
    if let Some(path) = &e.dump {
        let mut f = BufWriter::new(File::create(path)?);
        g.write_dump(&mut f, c, cfg.seed, cfg.hash_u64())?;
        f.flush()?;
    }
    g.write_csv(w)?;
    Ok(())
}

fn dimension(w: &mut Out, cfg: &Config, spec: &DecompositionSpec) -> Result<(), RunError> {
    let d = &cfg.dimension;
    let est = estimate_dimension(spec, d, cfg.seed, cfg.replicas.max(1));
    writeln!(w, "# window=[{},{}) pooled_slope={} pooled_stderr={}", d.window.0, d.window.1, est.pooled.slope, est.pooled.stderr)?;
    writeln!(w, "# mean_replica_slope={}", est.mean_slope())?;
    writeln!(w, "replica,k,delta,count")?;
    for (r, l) in est.ladders.iter().enumerate() {
        for (k, (d, c)) in l.deltas.iter().zip(&l.counts).enumerate() {
            writeln!(w, "{r},{},{d},{c}", k + 1)?;
        }
    }
    Ok(())
}

fn heights(w: &mut Out, cfg: &Config, spec: &DecompositionSpec) -> Result<(), RunError> {
    let h = &cfg.heights;
    let rows: Vec<(f64, f64)> = (0..h.samples)
        .into_par_iter()
        .map(|i| {
            let seed = replica_seed(cfg.seed, i);
            let perp = sample_height_perpetuity(spec, h.depth, seed);
            let pt = ParameterTree::new(spec.clone(), seed);
            let oracle = DistanceOracle::new(&evaluate_grid(&pt, h.grid_depth, h.grid_m));
            (perp, sample_distance_matrix(&oracle, 1, seed).get(0, 1))
        })
        .collect();
    let (a, b): (Vec<f64>, Vec<f64>) = rows.iter().copied().unzip();
    let ks = ks_two_sample(&a, &b);
    writeln!(w, "# ks_statistic={} ks_p_value={}", ks.statistic, ks.p_value)?;
    writeln!(w, "i,perpetuity,excursion")?;
    for (i, (p, e)) in rows.iter().enumerate() {
        writeln!(w, "{i},{p},{e}")?;
    }
    Ok(())
}

fn lamination(w: &mut Out, cfg: &Config) -> Result<(), RunError> {
    let l = &cfg.lamination;
    let cps = geometric_checkpoints(l.first, l.last, l.per_decade);
    let (summary, runs) = run_batch(l.model, l.k, &cps, l.n_eval, cfg.seed, cfg.replicas.max(1) as usize, l.fit_from)?;
    writeln!(w, "# height_exponent={} stderr={}", summary.height_fit.slope, summary.height_fit.stderr)?;
    writeln!(w, "# height_vs_insertions_exponent={}", summary.height_vs_insertions.slope)?;
    if let Some(f) = &summary.count_fit {
        writeln!(w, "# count_exponent={} stderr={}", f.slope, f.stderr)?;
    }
    let model = match l.model {
        LaminationModel::Recursive => "recursive",
        LaminationModel::Homogeneous => "homogeneous",
    };
    writeln!(w, "model,k,seed,replica,n,N_n,mean_height,max_height,height_exponent,count_exponent")?;
    for (r, run) in runs.iter().enumerate() {
        for c in &run.checkpoints {
            writeln!(
                w,
                "{model},{},{},{r},{},{},{},{},,",
                l.k,
                run.seed,
                c.n,
                c.insertions,
                c.mean_height,
                c.max_height
            )?;
        }
    }
    let count = summary.count_fit.as_ref().map(|f| f.slope.to_string()).unwrap_or_default();
    writeln!(w, "{model},{},{},mean,,,,,{},{count}", l.k, cfg.seed, summary.height_fit.slope)?;
    Ok(())
}
