use std::fmt::Write as _;

use serde_json::{json, Value};

use randrho::analytic::SpectralLaw;
use randrho::channels::random_operation;
use randrho::ensembles::EnsembleSpec;
use randrho::runner::{sample_batch, table};
use randrho::sampling::SeededStream;
use randrho::stats::{compare as compare_batch, histogram};

use crate::output::{emit, emit_csv, float, pretty};
use crate::{
    ChannelArgs, CompareArgs, DensityArgs, EnsembleArgs, Failure, Format, LawArgs, MomentsArgs,
    RunArgs, SampleArgs, TableArgs,
};

type Outcome = Result<(), Failure>;

const VERSION: &str = env!("CARGO_PKG_VERSION");

fn build_spec(args: &EnsembleArgs, n: usize) -> Result<EnsembleSpec, Failure> {
    let mut kv = vec![format!("kind={}", args.kind), format!("n={n}")];
    if let Some(k) = args.k {
        kv.push(format!("k={k}"));
    }
    if let Some(s) = args.s {
        kv.push(format!("s={s}"));
    }
    if let Some(w) = &args.weights {
        kv.push(format!("weights={}", w.replace(' ', "")));
    }
    if let Some(d) = &args.dims {
        kv.push(format!("dims={}", d.replace(' ', "")));
    }
    if let Some(a) = args.a {
        kv.push(format!("a={a:?}"));
    }
    if let Some(f) = &args.field {
        kv.push(format!("field={f}"));
    }
    Ok(EnsembleSpec::from_kv(&kv.join("\n"))?)
}

fn check_run(run: &RunArgs) -> Outcome {
    if run.samples == 0 {
        return Err(Failure::Config("--samples must be at least 1".into()));
    }
    if run.workers == 0 {
        return Err(Failure::Config("--workers must be at least 1".into()));
    }
    Ok(())
}

fn resolve_law(name: &str, k: Option<u32>, s: Option<u32>) -> Result<SpectralLaw, Failure> {
    let t = name.trim().to_ascii_lowercase();
    let need = |flag: &str| Failure::Config(format!("law `{name}` needs --{flag}"));
    let id = match t.as_str() {
        "fc" | "fuss_catalan" => format!("fuss_catalan({})", s.ok_or_else(|| need("s"))?),
        "nu_k" | "nu" => format!("nu_k({})", k.ok_or_else(|| need("k"))?),
        _ => t,
    };
    Ok(id.parse()?)
}

fn law_from(args: &LawArgs) -> Result<SpectralLaw, Failure> {
    resolve_law(&args.law, args.k, args.s)
}

fn spec_meta(command: &str, spec: &EnsembleSpec, run: &RunArgs) -> Value {
    json!({
        "command": command,
        "spec": spec.to_string(),
        "ensemble": spec,
        "samples": run.samples,
        "seed": run.seed,
        "version": VERSION,
    })
}

pub fn sample(a: SampleArgs) -> Outcome {
    check_run(&a.run)?;
    let spec = build_spec(&a.ensemble, a.n)?;
    let batch = sample_batch(&spec, a.run.samples, a.run.seed, a.run.workers)?;
    let meta = spec_meta("sample", &spec, &a.run);
    let out = a.run.out.as_deref();
    match a.format {
        Format::Csv => {
            let mut csv = String::from("sample_id,eig_index,lambda,x\n");
            let nf = spec.n as f64;
            for (id, spectrum) in batch.ids().iter().zip(batch.spectra()) {
                for (i, &l) in spectrum.lambdas().iter().enumerate() {
                    let _ = writeln!(csv, "{id},{i},{},{}", float(l), float(nf * l));
                }
            }
            emit_csv(out, &csv, &meta)?;
        }
        Format::Json => {
            let spectra: Vec<Value> = batch
                .ids()
                .iter()
                .zip(batch.spectra())
                .map(|(id, s)| json!({ "sample_id": id, "lambdas": s.lambdas() }))
                .collect();
            emit(out, &pretty(&json!({ "config": meta, "spectra": spectra })))?;
        }
        Format::Text => return Err(Failure::Config("sample writes csv or json".into())),
    }
    Ok(())
}

pub fn density(a: DensityArgs) -> Outcome {
    let law = law_from(&a.law)?;
    if law.is_dirac() {
        return Err(Failure::Config(format!("{law} is a point mass at x = 1")));
    }
    if a.bins == 0 {
        return Err(Failure::Config("--bins must be at least 1".into()));
    }
    let (lo, hi) = law.support();
    let xs: Vec<f64> = (0..a.bins)
        .map(|i| lo + (hi - lo) * (i as f64 + 0.5) / a.bins as f64)
        .collect();
    let ys: Vec<f64> = xs.iter().map(|&x| law.density(x)).collect();
    let meta = json!({
        "command": "density",
        "law": law.to_string(),
        "support": [lo, hi],
        "atom": law.atom(),
        "bins": a.bins,
        "version": VERSION,
    });
    let out = a.out.as_deref();
    match a.format {
        Format::Csv => {
            let mut csv = String::from("x,density\n");
            for (x, y) in xs.iter().zip(&ys) {
                let _ = writeln!(csv, "{},{}", float(*x), float(*y));
            }
            emit_csv(out, &csv, &meta)?;
        }
        Format::Json => emit(
            out,
            &pretty(&json!({ "config": meta, "x": xs, "density": ys })),
        )?,
        Format::Text => return Err(Failure::Config("density writes csv or json".into())),
    }
    Ok(())
}

pub fn moments(a: MomentsArgs) -> Outcome {
    let law = law_from(&a.law)?;
    let rows: Vec<(u32, f64, &str)> = (0..=a.max_order)
        .map(|m| match law.exact_moment(m) {
            Some(v) => (m, v, "exact"),
            None => (m, law.moment(m), "quadrature"),
        })
        .collect();
    let out = a.out.as_deref();
    match a.format {
        Format::Json => {
            let moments: Vec<Value> = rows
                .iter()
                .map(|(m, v, src)| json!({ "order": m, "value": v, "source": src }))
                .collect();
            let body =
                json!({ "law": law.to_string(), "max_order": a.max_order, "moments": moments });
            emit(out, &pretty(&body))?;
        }
        Format::Csv => {
            let mut csv = String::from("order,moment,source\n");
            for (m, v, src) in &rows {
                let _ = writeln!(csv, "{m},{},{src}", float(*v));
            }
            let meta = json!({ "command": "moments", "law": law.to_string(), "version": VERSION });
            emit_csv(out, &csv, &meta)?;
        }
        Format::Text => {
            let mut text = format!("{law}\n");
            for (m, v, src) in &rows {
                let _ = writeln!(text, "{m:>3}  {v:>24.16e}  {src}");
            }
            emit(out, &text)?;
        }
    }
    Ok(())
}

pub fn compare(a: CompareArgs) -> Outcome {
    check_run(&a.run)?;
    let spec = build_spec(&a.ensemble, a.n)?;
    let law = match &a.law {
        Some(name) => resolve_law(name, None, None)?,
        None => spec.asymptotic_law().ok_or_else(|| {
            Failure::Config(format!("no limiting law known for `{spec}`; pass --law"))
        })?,
    };
    let batch = sample_batch(&spec, a.run.samples, a.run.seed, a.run.workers)?;
    let report = compare_batch(&batch, &law)?;
    let mut flat = report.to_flat_json();
    if let Value::Object(map) = &mut flat {
        map.insert("seed".into(), json!(a.run.seed));
        map.insert("spec".into(), json!(spec.to_string()));
        map.insert("version".into(), json!(VERSION));
    }
    emit(a.run.out.as_deref(), &pretty(&flat))?;

    if let Some(path) = &a.histogram {
        let top = batch.pooled().last().copied().unwrap_or(0.0);
        let hi = law.support().1.max(top);
        let h = histogram(&batch, a.bins, (0.0, hi))?;
        let meta = json!({
            "command": "compare",
            "spec": spec.to_string(),
            "seed": a.run.seed,
            "samples": a.run.samples,
            "law": law.to_string(),
            "zero_fraction": h.zero_fraction,
            "outside_fraction": h.outside_fraction,
        });
        emit_csv(Some(path), &h.to_csv(), &meta)?;
    }
    Ok(())
}

pub fn table1(a: TableArgs) -> Outcome {
    if a.samples == 0 || a.workers == 0 || a.n == 0 {
        return Err(Failure::Config(
            "--n, --samples and --workers must be positive".into(),
        ));
    }
    let rows = table(a.n, a.samples, a.seed, a.workers)?;
    let body = json!({
        "config": { "command": "table1", "n": a.n, "samples": a.samples, "seed": a.seed, "version": VERSION },
        "rows": rows,
    });
    if a.format == Format::Json && a.out.is_none() {
        return Ok(emit(None, &pretty(&body))?);
    }
    let mut text = format!(
        "{:>2} {:>2}  {:<16} {:>9} {:>9}  {:>8} {:>8}  {:>9} {:>9}  {}\n",
        "k", "s", "law", "b", "<N l_max>", "M2", "N<Tr r2>", "S-lnN", "<S>-lnN", "x -> 0"
    );
    for r in &rows {
        let _ = writeln!(
            text,
            "{:>2} {:>2}  {:<16} {:>9.4} {:>9.4}  {:>8.4} {:>8.4}  {:>9.4} {:>9.4}  {}",
            r.k,
            r.s,
            r.law,
            r.support_edge_predicted,
            r.support_edge_empirical,
            r.m2_predicted,
            r.m2_empirical,
            r.entropy_offset_predicted,
            r.entropy_offset_empirical,
            r.singularity
        );
    }
    for r in rows.iter().filter(|r| r.note.is_some()) {
        let _ = writeln!(
            text,
            "note (k={}, s={}): {}",
            r.k,
            r.s,
            r.note.as_deref().unwrap_or("")
        );
    }
    let _ = writeln!(
        text,
        "N = {}, {} samples per row, seed {}",
        a.n, a.samples, a.seed
    );
    emit(None, &text)?;
    if let Some(path) = &a.out {
        emit(Some(path), &pretty(&body))?;
    }
    Ok(())
}

pub fn channel(a: ChannelArgs) -> Outcome {
    if a.n == 0 || a.samples == 0 {
        return Err(Failure::Config("--n and --samples must be positive".into()));
    }
    let n = a.n;
    let spec = build_spec(&a.ensemble, n * n)?;
    let mut reports = Vec::with_capacity(a.samples);
    let mut states = Vec::with_capacity(a.samples);
    for id in 0..a.samples as u64 {
        let mut rng = SeededStream::new(a.seed, id);
        let choi = random_operation(n, &spec, &mut rng)?;
        reports.push(choi.report()?);
        states.push(choi);
    }
    let all_cptp = reports.iter().all(|r| r.is_cptp());
    let meta = json!({
        "command": "channel",
        "n": n,
        "spec": spec.to_string(),
        "samples": a.samples,
        "seed": a.seed,
        "version": VERSION,
        "reports": reports,
        "all_cptp": all_cptp,
    });
    let out = a.out.as_deref();
    match a.format {
        Format::Csv => {
            let mut csv = String::from("sample_id,row");
            for j in 0..n * n {
                let _ = write!(csv, ",re_{j},im_{j}");
            }
            csv.push('\n');
            for (id, choi) in states.iter().enumerate() {
                let sigma = choi.sigma();
                for i in 0..n * n {
                    let _ = write!(csv, "{id},{i}");
                    for z in sigma.row(i) {
                        let _ = write!(csv, ",{},{}", float(z.re), float(z.im));
                    }
                    csv.push('\n');
                }
            }
            emit_csv(out, &csv, &meta)?;
        }
        Format::Json => {
            let sigmas: Vec<Value> = states
                .iter()
                .map(|c| {
                    let m = c.sigma();
                    let re: Vec<Vec<f64>> = (0..n * n)
                        .map(|i| m.row(i).iter().map(|z| z.re).collect())
                        .collect();
                    let im: Vec<Vec<f64>> = (0..n * n)
                        .map(|i| m.row(i).iter().map(|z| z.im).collect())
                        .collect();
                    json!({ "re": re, "im": im })
                })
                .collect();
            emit(out, &pretty(&json!({ "config": meta, "choi": sigmas })))?;
        }
        Format::Text => return Err(Failure::Config("channel writes csv or json".into())),
    }
    if !all_cptp {
        return Err(Failure::Numerical(
            "a generated channel failed the CPTP checks".into(),
        ));
    }
    Ok(())
}
