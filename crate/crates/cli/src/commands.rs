use crate::args::{BenchKind, CompareArgs, CompareMode, Format, MetricArgs, MetricKind, Opts};
use crate::error::{CliError, CliResult};
use crate::output::{csv_field, manifest_for, num, to_json, Run};
use ggc_fading::config::Spec;
use ggc_fading::metrics::{
    asymptotic_ser_at, avg_ser_dpsk, avg_ser_mpsk, ergodic_capacity, outage, snr_gain, Estimate,
};
use ggc_fading::ordering::{benchmark_gap, lt_order_check, nakagami_benchmark, shannon_order_check, BenchMetric};
use ggc_fading::simkit::{db_to_linear, simulate_ser, SimConfig};
use ggc_fading::{ChannelModel, Modulation, ThorinMeasure};
use serde_json::{json, Map, Value};

/// Writes a single report to `--out` (with a manifest beside it) or stdout.
/// `render` receives the manifest file name to embed, if any.
fn emit(opts: &Opts, config: Value, render: impl FnOnce(Option<String>) -> String) -> CliResult<()> {
    match &opts.out {
        None => {
            print!("{}", render(None));
            Ok(())
        }
        Some(path) => {
            let manifest = manifest_for(path);
            let name = manifest.file_name().map(|n| n.to_string_lossy().into_owned());
            let mut run = Run::new(config, opts.seed);
            run.write(path, &render(name))?;
            run.finish(&manifest)
        }
    }
}

fn with_manifest(mut v: Value, manifest: Option<String>) -> Value {
    if let (Some(m), Some(obj)) = (manifest, v.as_object_mut()) {
        obj.insert("manifest".into(), Value::String(m));
    }
    v
}

fn thorin_json(ch: &ChannelModel) -> Value {
    match ch.thorin() {
        Ok(Some(mu)) => thorin_measure_json(&mu),
        _ => Value::String("unknown".into()),
    }
}

fn thorin_measure_json(mu: &ThorinMeasure) -> Value {
    let mut obj = Map::new();
    obj.insert("atoms".into(), json!(mu.atoms()));
    if let Some(d) = mu.density() {
        obj.insert("density".into(), Value::String(d.name().into()));
    }
    obj.insert("mass".into(), mu.thorin_mass().map(|m| json!(m)).unwrap_or(Value::Null));
    Value::Object(obj)
}

pub fn describe_report(spec: &Spec) -> Value {
    let ch = spec.channel();
    let h0 = match ch.h0() {
        Ok(Some(h)) => json!(h),
        _ => Value::String("unknown".into()),
    };
    json!({
        "spec": spec,
        "label": ch.label(),
        "class": ch.class_tags(),
        "diversity": ch.diversity(),
        "mean": ch.mean().ok(),
        "thorin": thorin_json(ch),
        "h0": h0,
    })
}

fn flat_rows(v: &Value) -> Vec<(String, String)> {
    v.as_object()
        .map(|o| {
            o.iter()
                .map(|(k, v)| {
                    let s = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    (k.clone(), s)
                })
                .collect()
        })
        .unwrap_or_default()
}

pub fn describe(opts: &Opts) -> CliResult<()> {
    let spec = opts.spec()?;
    let report = describe_report(&spec);
    let config = json!({ "command": "describe", "opts": opts });
    let format = opts.format.unwrap_or(Format::Table);
    emit(opts, config, |m| {
        let report = with_manifest(report, m);
        match format {
            Format::Json => to_json(&report),
            Format::Csv => {
                let mut s = String::from("key,value\n");
                for (k, v) in flat_rows(&report) {
                    s.push_str(&format!("{k},{}\n", csv_field(&v)));
                }
                s
            }
            Format::Table => {
                let rows = flat_rows(&report);
                let w = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
                rows.iter().map(|(k, v)| format!("{k:<w$}  {v}\n")).collect()
            }
        }
    })
}

struct Row {
    point: f64,
    est: Estimate,
    asymptotic: Option<f64>,
}

pub fn metric(opts: &Opts, args: &MetricArgs) -> CliResult<()> {
    let spec = opts.spec()?;
    let ch = spec.channel();
    let mc = opts.mc();
    let modulation = match args.metric {
        MetricKind::SerDpsk => {
            if opts.modulation.is_some() && opts.modulation(Modulation::Dpsk)? != Modulation::Dpsk {
                eprintln!("warning: --mod is ignored by ser-dpsk");
            }
            Some(Modulation::Dpsk)
        }
        MetricKind::SerMpsk => match opts.modulation(Modulation::mpsk(4)?)? {
            Modulation::Dpsk => return Err(CliError::Usage("ser-mpsk needs --mod mpsk:M".into())),
            m => Some(m),
        },
        _ => None,
    };
    if args.asymptotic && modulation.is_none() {
        return Err(CliError::Usage("--asymptotic applies to ser-dpsk and ser-mpsk only".into()));
    }
    if args.simulate && modulation.is_none() {
        return Err(CliError::Usage("--simulate applies to ser-dpsk and ser-mpsk only".into()));
    }

    let mut rows = Vec::new();
    let point_name = if args.metric == MetricKind::Outage {
        if args.threshold.is_empty() {
            return Err(CliError::Usage("outage needs --threshold X[,X...]".into()));
        }
        for &x in &args.threshold {
            rows.push(Row {
                point: x,
                est: outage(ch, x, &mc)?,
                asymptotic: None,
            });
        }
        "x"
    } else {
        let grid = opts.grid((0.0, 30.0, 5.0))?;
        if args.simulate {
            let m = modulation.expect("checked above");
            let cfg = SimConfig::new(opts.seed(), opts.samples.unwrap_or(100_000), grid.clone(), m)?;
            let curve = simulate_ser(ch, &cfg)?;
            for i in 0..grid.len() {
                rows.push(Row {
                    point: grid[i],
                    est: Estimate {
                        value: curve.ser[i],
                        stderr: curve.stderr[i],
                        samples: curve.n[i],
                        method: ggc_fading::Method::MonteCarlo,
                    },
                    asymptotic: None,
                });
            }
        } else {
            for &db in &grid {
                let rho = db_to_linear(db);
                let est = match args.metric {
                    MetricKind::SerDpsk => avg_ser_dpsk(ch, rho, &mc)?,
                    MetricKind::SerMpsk => match modulation {
                        Some(Modulation::Mpsk { m }) => avg_ser_mpsk(ch, rho, m, &mc)?,
                        _ => unreachable!("ser-mpsk resolves to an M-PSK modulation"),
                    },
                    _ => ergodic_capacity(ch, rho, &mc)?,
                };
                rows.push(Row {
                    point: db,
                    est,
                    asymptotic: None,
                });
            }
        }
        if args.asymptotic {
            let m = modulation.expect("checked above");
            for r in &mut rows {
                r.asymptotic = Some(asymptotic_ser_at(ch, m, db_to_linear(r.point))?);
            }
        }
        "rho_db"
    };

    let header = json!({
        "command": "metric",
        "metric": args.metric,
        "modulation": modulation,
        "channel": spec,
        "seed": opts.seed(),
    });
    let config = json!({ "command": "metric", "opts": opts, "metric": args.metric });
    let format = opts.format.unwrap_or(Format::Csv);
    emit(opts, config, |m| {
        let header = with_manifest(header, m);
        match format {
            Format::Json => {
                let rows: Vec<Value> = rows
                    .iter()
                    .map(|r| {
                        let mut o = json!({
                            point_name: r.point,
                            "value": r.est.value,
                            "stderr": r.est.stderr,
                            "samples": r.est.samples,
                            "method": r.est.method,
                        });
                        if let Some(a) = r.asymptotic {
                            o["asymptotic"] = json!(a);
                        }
                        o
                    })
                    .collect();
                let mut out = header;
                out["rows"] = Value::Array(rows);
                to_json(&out)
            }
            Format::Csv | Format::Table => {
                let mut s = format!("# {header}\n{point_name},value,stderr,samples,method");
                if args.asymptotic {
                    s.push_str(",asymptotic");
                }
                s.push('\n');
                for r in &rows {
                    s.push_str(&format!(
                        "{},{},{},{},{}",
                        num(r.point),
                        num(r.est.value),
                        num(r.est.stderr),
                        r.est.samples,
                        r.est.method
                    ));
                    if let Some(a) = r.asymptotic {
                        s.push(',');
                        s.push_str(&num(a));
                    }
                    s.push('\n');
                }
                s
            }
        }
    })
}

fn known_thorin(ch: &ChannelModel) -> CliResult<ThorinMeasure> {
    ch.thorin()?.ok_or_else(|| {
        CliError::Core(ggc_fading::Error::Precondition(format!(
            "Thorin measure of {} is not known",
            ch.label()
        )))
    })
}

pub fn compare(opts: &Opts, args: &CompareArgs) -> CliResult<()> {
    let spec1 = opts.spec()?;
    let ch1 = spec1.channel();
    let mc = opts.mc();
    let config = json!({ "command": "compare", "opts": opts, "mode": args.mode });
    let format = opts.format.unwrap_or(Format::Json);

    if args.mode == CompareMode::Benchmark {
        if opts.channel2.is_some() {
            eprintln!("warning: --channel2 is ignored by the benchmark comparison");
        }
        let metric = match args.metric {
            BenchKind::SerDpsk => BenchMetric::SerDpsk,
            BenchKind::Capacity => BenchMetric::Capacity,
            BenchKind::SerMpsk => match opts.modulation(Modulation::mpsk(4)?)? {
                Modulation::Mpsk { m } => BenchMetric::SerMpsk(m),
                Modulation::Dpsk => return Err(CliError::Usage("ser-mpsk needs --mod mpsk:M".into())),
            },
        };
        let bench = nakagami_benchmark(ch1.diversity())?;
        let grid = opts.grid((0.0, 30.0, 5.0))?;
        let mut gaps = Vec::new();
        for &db in &grid {
            gaps.push((db, benchmark_gap(ch1, metric, db_to_linear(db), &mc)?));
        }
        let all_hold = gaps.iter().all(|g| g.1.bound_holds);
        let header = json!({
            "command": "compare",
            "mode": args.mode,
            "metric": metric,
            "channel": spec1,
            "benchmark": bench,
            "bound_holds_everywhere": all_hold,
        });
        return emit(opts, config, |m| {
            let header = with_manifest(header, m);
            if format == Format::Json {
                let points: Vec<Value> = gaps
                    .iter()
                    .map(|(db, g)| {
                        json!({
                            "rho_db": db,
                            "channel": g.channel,
                            "benchmark": g.benchmark,
                            "gap": g.gap,
                            "stderr": g.stderr,
                            "bound_holds": g.bound_holds,
                        })
                    })
                    .collect();
                let mut out = header;
                out["points"] = Value::Array(points);
                to_json(&out)
            } else {
                let mut s = format!("# {header}\nrho_db,channel,benchmark,gap,stderr,bound_holds\n");
                for (db, g) in &gaps {
                    s.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        num(*db),
                        num(g.channel.value),
                        num(g.benchmark.value),
                        num(g.gap),
                        num(g.stderr),
                        g.bound_holds
                    ));
                }
                s
            }
        });
    }

    let spec2 = opts.spec2()?;
    let ch2 = spec2.channel();
    let mut report = json!({
        "command": "compare",
        "mode": args.mode,
        "channel": spec1,
        "channel2": spec2,
    });
    match args.mode {
        CompareMode::LtOrder => {
            let v = lt_order_check(ch1, ch2, args.grid()?, &mc)?;
            report["holds"] = json!(v.holds());
            report["verdict"] = json!(v);
        }
        CompareMode::ShannonOrder => {
            let (mu1, mu2) = (known_thorin(ch1)?, known_thorin(ch2)?);
            let v = shannon_order_check(&mu1, &mu2, args.grid()?)?;
            report["holds"] = json!(v.holds());
            report["verdict"] = json!(v);
        }
        CompareMode::SnrGain => {
            let g = snr_gain(ch1, ch2)?;
            report["snr_gain_db"] = json!(g.db);
            report["via_thorin_db"] = json!(g.via_thorin);
        }
        CompareMode::Benchmark => unreachable!("handled above"),
    }
    if format != Format::Json {
        eprintln!("warning: --format is ignored; this comparison writes JSON");
    }
    emit(opts, config, |m| to_json(&with_manifest(report, m)))
}
