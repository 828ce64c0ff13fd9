//! Data for the three reference experiments.
//!
//! * fig1: two-branch MRC of unit-power Pareto(1,1,1.25) branches against
//!   its Nakagami(2.5) benchmark (DPSK).
//! * fig2: Nakagami(2) against the unnormalized gen-gamma(2,2,1) (DPSK), with
//!   the analytic and the measured SNR gain.
//! * fig34: X = Gamma(2,1)+Gamma(2,2) and Y = Gamma(1,0.5)+Gamma(3,3), their
//!   Thorin measures and DPSK curves.

use crate::args::{Figure, Opts, ReproduceArgs, Scale};
use crate::error::CliResult;
use crate::output::{num, to_json, Run};
use ggc_fading::metrics::snr_gain;
use ggc_fading::ordering::nakagami_benchmark;
use ggc_fading::simkit::{estimate_diversity, estimate_snr_gain, exact_curve, simulate_ser, SerCurve, SimConfig};
use ggc_fading::{ChannelModel, McOptions, Modulation, SystemModel};
use serde::Serialize;
use serde_json::{json, Value};
use std::path::PathBuf;

/// Margin, in standard errors, by which the simulated fig1 curve has to
/// clear the benchmark at reliable points.
pub const FIG1_MARGIN_SE: f64 = 2.0;
/// A point is reliable when its SER exceeds this many standard errors.
pub const RELIABLE_SE: f64 = 10.0;

impl Scale {
    fn samples(self) -> u64 {
        match self {
            Scale::Desk => 100_000,
            Scale::Full => 1_000_000,
        }
    }

    fn grid(self) -> (f64, f64, f64) {
        match self {
            Scale::Desk => (0.0, 35.0, 2.5),
            Scale::Full => (0.0, 40.0, 1.0),
        }
    }
}

struct Ctx {
    figure: Figure,
    scale: Scale,
    dir: PathBuf,
    cfg: SimConfig,
    run: Run,
}

impl Ctx {
    /// Header shared by every file of the run. Holds nothing that depends on
    /// timing or thread count.
    fn header(&self, curve: &str, channel: &Value) -> Value {
        json!({
            "figure": self.figure,
            "curve": curve,
            "scale": self.scale,
            "channel": channel,
            "config": self.cfg,
            "tool": concat!("ggc ", env!("CARGO_PKG_VERSION")),
            "manifest": "manifest.json",
        })
    }

    fn write_curve(&mut self, name: &str, curve: &SerCurve, channel: &Value) -> CliResult<()> {
        let text = curve.to_csv(&self.header(name, channel));
        let path = self.dir.join(format!("{}_{name}.csv", self.fig_name()));
        self.run.write(&path, &text)
    }

    fn write_json(&mut self, name: &str, v: &impl Serialize) -> CliResult<()> {
        let path = self.dir.join(format!("{}_{name}.json", self.fig_name()));
        self.run.write(&path, &to_json(v))
    }

    fn fig_name(&self) -> &'static str {
        match self.figure {
            Figure::Fig1 => "fig1",
            Figure::Fig2 => "fig2",
            Figure::Fig34 => "fig34",
        }
    }

    fn simulate(&self, ch: &ChannelModel) -> CliResult<SerCurve> {
        Ok(simulate_ser(ch, &self.cfg)?)
    }

    fn exact(&self, ch: &ChannelModel) -> CliResult<SerCurve> {
        let mc = McOptions {
            seed: self.cfg.seed,
            samples: self.cfg.samples,
        };
        Ok(exact_curve(ch, &self.cfg.rho_db, Modulation::Dpsk, &mc)?)
    }
}

fn spec_json(v: &impl Serialize) -> Value {
    serde_json::to_value(v).expect("spec serializes")
}

pub fn run(opts: &Opts, args: &ReproduceArgs) -> CliResult<()> {
    if opts.modulation.is_some() {
        eprintln!("warning: --mod is ignored; the reference experiments use DPSK");
    }
    let samples = opts.samples.unwrap_or(args.scale.samples());
    let grid = opts.grid(args.scale.grid())?;
    let cfg = SimConfig::new(opts.seed(), samples, grid, Modulation::Dpsk)?;
    let dir = opts.out.clone().unwrap_or_else(|| PathBuf::from(format!("ggc-{:?}", args.figure).to_lowercase()));
    let config = json!({ "command": "reproduce", "figure": args.figure, "scale": args.scale, "opts": opts, "sim": cfg });
    let mut ctx = Ctx {
        figure: args.figure,
        scale: args.scale,
        dir: dir.clone(),
        cfg,
        run: Run::new(config, Some(opts.seed())),
    };
    let summary = match args.figure {
        Figure::Fig1 => fig1(&mut ctx)?,
        Figure::Fig2 => fig2(&mut ctx)?,
        Figure::Fig34 => fig34(&mut ctx)?,
    };
    ctx.write_json("summary", &summary)?;
    ctx.run.finish(&dir.join("manifest.json"))?;
    print!("{}", to_json(&summary));
    Ok(())
}

/// Smallest SER the curve resolves, scanning from low SNR up to the first
/// point that is not above `RELIABLE_SE` standard errors.
fn lowest_reliable(c: &SerCurve) -> Option<f64> {
    c.ser
        .iter()
        .zip(&c.stderr)
        .take_while(|(s, se)| **s > 0.0 && **s > RELIABLE_SE * **se)
        .map(|(s, _)| *s)
        .last()
}

fn diversity_fit(c: &SerCurve) -> Value {
    let (first, last) = (c.rho_db[0], *c.rho_db.last().expect("grid is non-empty"));
    let lo = (last - 10.0).max(first);
    match estimate_diversity(c, (lo, last)) {
        Ok(d) => json!({ "window_db": [lo, last], "diversity": d }),
        Err(e) => json!({ "window_db": [lo, last], "error": e.to_string() }),
    }
}

fn fig1(ctx: &mut Ctx) -> CliResult<Value> {
    let branch = ChannelModel::pareto(1.0, 1.0, 1.25)?;
    let sys = SystemModel::mrc_unit_power(vec![branch.clone(), branch])?;
    let bench = nakagami_benchmark(sys.diversity())?;
    let sim = ctx.simulate(sys.channel())?;
    let exact = ctx.exact(&bench)?;
    ctx.write_curve("pareto_mrc", &sim, &spec_json(&sys))?;
    ctx.write_curve("nakagami", &exact, &spec_json(&bench))?;

    let mut points = Vec::new();
    let mut holds = true;
    let mut min_z = f64::INFINITY;
    for i in 0..sim.ser.len() {
        let (s, se, b) = (sim.ser[i], sim.stderr[i], exact.ser[i]);
        let reliable = s > RELIABLE_SE * se && b > 0.0;
        let z = (s - b) / se;
        if reliable {
            min_z = min_z.min(z);
            holds &= z >= FIG1_MARGIN_SE;
        }
        points.push(json!({
            "rho_db": sim.rho_db[i],
            "simulated": s,
            "stderr": se,
            "benchmark": b,
            "margin_se": z,
            "reliable": reliable,
        }));
    }
    Ok(json!({
        "figure": "fig1",
        "system": sys,
        "benchmark": bench,
        "diversity": sys.diversity(),
        "required_margin_se": FIG1_MARGIN_SE,
        "min_margin_se": min_z,
        "bound_holds": holds,
        "simulated_diversity_fit": diversity_fit(&sim),
        "points": points,
    }))
}

fn fig2(ctx: &mut Ctx) -> CliResult<Value> {
    let n2 = ChannelModel::nakagami(2.0)?;
    let gg = ChannelModel::gen_gamma(2.0, 2.0, 1.0)?;
    let a = ctx.simulate(&n2)?;
    let b = ctx.simulate(&gg)?;
    ctx.write_curve("nakagami", &a, &spec_json(&n2))?;
    ctx.write_curve("gengamma", &b, &spec_json(&gg))?;
    let analytic = snr_gain(&n2, &gg)?;
    let gain_at = |target: f64| match estimate_snr_gain(&a, &b, target) {
        Ok(g) => json!({ "target_ser": target, "gain_db": g }),
        Err(e) => json!({ "target_ser": target, "error": e.to_string() }),
    };
    let lowest = match (lowest_reliable(&a), lowest_reliable(&b)) {
        (Some(x), Some(y)) => Some(x.max(y)),
        _ => None,
    };
    Ok(json!({
        "figure": "fig2",
        "channels": [n2, gg],
        "analytic_gain_db": analytic.db,
        "analytic_gain_via_thorin_db": analytic.via_thorin,
        "measured": [gain_at(1e-3), gain_at(1e-4)],
        "lowest_common_ser": lowest,
        "measured_at_lowest_common_ser": lowest.map(gain_at),
        "simulated_diversity_fit": [diversity_fit(&a), diversity_fit(&b)],
    }))
}

fn thorin_csv(rows: &[(&str, &ChannelModel)], header: &Value) -> CliResult<String> {
    let mut s = format!("# {header}\nsystem,rate,mass\n");
    for (name, ch) in rows {
        let mu = ch.thorin()?.expect("gamma sums have atomic Thorin measures");
        for a in mu.atoms() {
            s.push_str(&format!("{name},{},{}\n", num(a.rate), num(a.mass)));
        }
    }
    Ok(s)
}

fn fig34(ctx: &mut Ctx) -> CliResult<Value> {
    let g = ChannelModel::gamma;
    let x = SystemModel::mrc(vec![g(2.0, 1.0)?, g(2.0, 2.0)?])?;
    let y = SystemModel::mrc(vec![g(1.0, 0.5)?, g(3.0, 3.0)?])?;
    let header = ctx.header("thorin", &json!({ "x": x, "y": y }));
    let text = thorin_csv(&[("x", x.channel()), ("y", y.channel())], &header)?;
    let path = ctx.dir.join("fig34_thorin.csv");
    ctx.run.write(&path, &text)?;

    let (sx, sy) = (ctx.simulate(x.channel())?, ctx.simulate(y.channel())?);
    let (ex, ey) = (ctx.exact(x.channel())?, ctx.exact(y.channel())?);
    ctx.write_curve("x", &sx, &spec_json(&x))?;
    ctx.write_curve("y", &sy, &spec_json(&y))?;
    ctx.write_curve("x_exact", &ex, &spec_json(&x))?;
    ctx.write_curve("y_exact", &ey, &spec_json(&y))?;

    let below = |a: &SerCurve, b: &SerCurve| a.ser.iter().zip(&b.ser).all(|(p, q)| p < q);
    let describe = |s: &SystemModel| -> CliResult<Value> {
        let mu = s.channel().thorin()?.expect("atomic");
        Ok(json!({
            "system": s,
            "thorin_mass": mu.thorin_mass()?,
            "mean": s.channel().mean()?,
            "thorin_mean": mu.mean()?,
        }))
    };
    Ok(json!({
        "figure": "fig34",
        "x": describe(&x)?,
        "y": describe(&y)?,
        "exact_x_below_y": below(&ex, &ey),
        "simulated_x_below_y": below(&sx, &sy),
    }))
}
