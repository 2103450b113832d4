//! One runner per subcommand. Each fills unset settings with its defaults,
//! so the echoed config is the complete set of values the run used.

use ciflab_core::asymptotics::{cif_check, cwikel_probe, l2_blowup_probe, BlowupReport, CifConfig, CwikelReport};
use ciflab_core::lemmalab::{run_suites, Distribution, LemmaSettings, Suite, Verdict, DEFAULT_SEED};
use ciflab_core::orlicz::{default_ladder, membership_report_on, TorusFunction};
use ciflab_core::torusop::{write_spectrum_csv, BuildOptions, LatticeBasis, OperatorKind, TruncatedOperator};
use ciflab_core::Exec;
use serde::Serialize;

use crate::config::Settings;

/// A finished run: the JSON report, its verdict and any CSV tables.
pub struct Outcome {
    pub json: String,
    pub pass: bool,
    /// `(file name, contents)`; the first table is the one printed to stdout.
    pub tables: Vec<(String, String)>,
    /// Raw binary artifacts, written only with `--out`.
    pub blobs: Vec<(String, Vec<u8>)>,
}

type Run<T> = Result<T, String>;

fn fail(e: impl std::fmt::Display) -> String {
    e.to_string()
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    command: &'a str,
    config: &'a Settings,
    report: &'a T,
}

fn envelope<T: Serialize>(command: &str, config: &Settings, report: &T) -> Run<String> {
    let mut json = serde_json::to_string_pretty(&Envelope {
        command,
        config,
        report,
    })
    .map_err(fail)?;
    json.push('\n');
    Ok(json)
}

fn function(s: &mut Settings) -> Run<TorusFunction> {
    let d = *s.d.get_or_insert(1);
    let family = s
        .family
        .as_deref()
        .ok_or("a function family is required (--family NAME)")?;
    TorusFunction::from_params(d, family, &s.params).map_err(fail)
}

fn default_schedule(d: usize) -> Vec<f64> {
    match d {
        1 => vec![256.0, 512.0, 1024.0, 2048.0],
        2 => vec![24.0, 32.0, 40.0, 48.0],
        _ => vec![4.0, 6.0, 8.0, 10.0],
    }
}

fn csv_float(x: f64) -> String {
    format!("{x:.17e}")
}

fn table(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut out = format!("{header}\n");
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn buffer(write: impl FnOnce(&mut Vec<u8>) -> ciflab_core::Result<()>) -> Run<String> {
    let mut buf = Vec::new();
    write(&mut buf).map_err(fail)?;
    String::from_utf8(buf).map_err(fail)
}

/// Cutoffs print as plain numbers in file names: `cif_R256_pos.csv`.
fn cutoff_tag(r: f64) -> String {
    format!("{r}")
}

pub fn cif(mut s: Settings, exec: Exec) -> Run<Outcome> {
    let f = function(&mut s)?;
    let d = f.dim();
    let schedule = s.schedule.get_or_insert_with(|| default_schedule(d)).clone();
    let tolerance = *s.tolerance.get_or_insert(if d == 1 { 0.05 } else { 0.15 });
    let mut cfg = CifConfig::new(schedule, tolerance);
    cfg.fast_diagonal = *s.fast_diagonal.get_or_insert(cfg.fast_diagonal);
    cfg.oversample = *s.oversample.get_or_insert(cfg.oversample);
    cfg.exec = exec;
    let report = cif_check(&f, &cfg).map_err(fail)?;

    let summary = table(
        "R,dim,est_pos,est_neg",
        report.rungs.iter().map(|r| {
            vec![
                cutoff_tag(r.cutoff),
                r.dim.to_string(),
                csv_float(r.est_pos),
                csv_float(r.est_neg),
            ]
        }),
    );
    let mut tables = vec![("cif.csv".to_string(), summary)];
    for (i, rung) in report.rungs.iter().enumerate() {
        for (neg, part) in [(false, "pos"), (true, "neg")] {
            let csv = buffer(|w| report.write_rung_csv(i, neg, w))?;
            tables.push((format!("cif_R{}_{part}.csv", cutoff_tag(rung.cutoff)), csv));
        }
    }
    Ok(Outcome {
        json: envelope("cif", &s, &report)?,
        pass: report.verdicts.pass,
        tables,
        blobs: Vec::new(),
    })
}

#[derive(Serialize)]
struct LemmaReport {
    pass: bool,
    verdicts: Vec<Verdict>,
}

pub fn lemmas(mut s: Settings, exec: Exec) -> Run<Outcome> {
    let defaults = LemmaSettings::default();
    let names = s
        .only
        .get_or_insert_with(|| Suite::ALL.iter().map(|x| x.name().to_string()).collect())
        .clone();
    let suites = names
        .iter()
        .map(|n| Suite::parse(n.trim()))
        .collect::<Result<Vec<_>, _>>()
        .map_err(fail)?;
    if suites.is_empty() {
        return Err("--only selects no suites".into());
    }
    let distribution = s
        .distribution
        .get_or_insert_with(|| "gaussian_hermitian".into())
        .clone();
    let trials = *s.trials.get_or_insert(defaults.product_trials);
    let settings = LemmaSettings {
        seed: *s.seed.get_or_insert(DEFAULT_SEED),
        distribution: Distribution::parse(&distribution).map_err(fail)?,
        product_trials: trials,
        holder_trials: trials,
        n_max: *s.n_max.get_or_insert(defaults.n_max),
        exec,
        ..defaults
    };
    let verdicts = run_suites(&suites, &settings).map_err(fail)?;
    let report = LemmaReport {
        pass: verdicts.iter().all(|v| v.pass),
        verdicts,
    };
    let csv = table(
        "test,seed,trials,worst_case,threshold,pass",
        report.verdicts.iter().map(|v| {
            vec![
                v.test.clone(),
                format!("{:#x}", v.seed),
                v.trials.to_string(),
                csv_float(v.worst_case),
                csv_float(v.threshold),
                v.pass.to_string(),
            ]
        }),
    );
    Ok(Outcome {
        json: envelope("lemmas", &s, &report)?,
        pass: report.pass,
        tables: vec![("lemmas.csv".into(), csv)],
        blobs: Vec::new(),
    })
}

pub fn norms(mut s: Settings, exec: Exec) -> Run<Outcome> {
    let f = function(&mut s)?;
    let ladder = s.resolutions.get_or_insert_with(|| default_ladder(f.dim())).clone();
    let report = membership_report_on(&f, &ladder, exec).map_err(fail)?;
    let csv = table(
        "res,l2,lm",
        report
            .ladder
            .iter()
            .map(|r| vec![r.res.to_string(), csv_float(r.l2), csv_float(r.lm)]),
    );
    Ok(Outcome {
        json: envelope("norms", &s, &report)?,
        pass: report.verdict_l2.member.is_some() && report.verdict_lm.member.is_some(),
        tables: vec![("norms.csv".into(), csv)],
        blobs: Vec::new(),
    })
}

pub fn probe(mut s: Settings, exec: Exec) -> Run<Outcome> {
    let which = s.probe.clone().ok_or("probe needs a kind: cwikel or blowup")?;
    match which.as_str() {
        "cwikel" => {
            let f = function(&mut s)?;
            let schedule = s.schedule.get_or_insert_with(|| default_schedule(f.dim())).clone();
            let report: CwikelReport = cwikel_probe(&f, &schedule, exec).map_err(fail)?;
            let csv = table(
                "R,dim,quasinorm,ratio",
                report.rows.iter().map(|r| {
                    vec![
                        cutoff_tag(r.cutoff),
                        r.dim.to_string(),
                        csv_float(r.quasinorm),
                        csv_float(r.ratio),
                    ]
                }),
            );
            Ok(Outcome {
                json: envelope("probe", &s, &report)?,
                pass: report.bounded,
                tables: vec![("probe_cwikel.csv".into(), csv)],
                blobs: Vec::new(),
            })
        }
        "blowup" => {
            if let Some(family) = s.family.as_deref().filter(|f| *f != "radial_logspike") {
                return Err(format!("the blow-up probe runs on radial_logspike, not {family}"));
            }
            let d = *s.d.get_or_insert(2);
            let cap_text = s.params.entry("cap".into()).or_insert_with(|| "1000000".into()).clone();
            if let Some(k) = s.params.keys().find(|k| *k != "cap") {
                return Err(format!("the blow-up probe takes only the cap parameter, not '{k}'"));
            }
            let cap: f64 = cap_text
                .parse()
                .map_err(|_| format!("cap: cannot parse '{cap_text}'"))?;
            s.family = Some("radial_logspike".into());
            let schedule = s.schedule.get_or_insert_with(|| vec![16.0, 24.0, 32.0]).clone();
            let report: BlowupReport =
                l2_blowup_probe(d, cap, &schedule, exec).map_err(|e| format!("blow-up probe: {e}"))?;
            let csv = table(
                "R,dim,hs_norm,hs_growth,est_pos",
                report.rows.iter().map(|r| {
                    vec![
                        cutoff_tag(r.cutoff),
                        r.dim.to_string(),
                        csv_float(r.hs_norm),
                        r.hs_growth.map(csv_float).unwrap_or_default(),
                        csv_float(r.est_pos),
                    ]
                }),
            );
            Ok(Outcome {
                json: envelope("probe", &s, &report)?,
                pass: report.hs_blowup && report.symmetric_within_tolerance,
                tables: vec![("probe_blowup.csv".into(), csv)],
                blobs: Vec::new(),
            })
        }
        other => Err(format!("unknown probe '{other}' (expected cwikel or blowup)")),
    }
}

#[derive(Serialize)]
struct SpectrumReport {
    kind: OperatorKind,
    d: usize,
    #[serde(rename = "R")]
    cutoff: f64,
    dim: usize,
    hs_norm: f64,
    singular_values: Vec<f64>,
}

pub fn spectrum(mut s: Settings, exec: Exec) -> Run<Outcome> {
    let f = function(&mut s)?;
    let cutoff = *s.cutoff.get_or_insert(16.0);
    let kind_name = s.kind.get_or_insert_with(|| "symmetric".into()).replace('-', "_");
    let kind: OperatorKind = serde_json::from_value(serde_json::Value::String(kind_name.clone()))
        .map_err(|_| format!("unknown operator kind '{kind_name}'"))?;
    let opts = BuildOptions {
        oversample: *s.oversample.get_or_insert(BuildOptions::default().oversample),
        exec,
        ..BuildOptions::default()
    };
    let basis = LatticeBasis::new(f.dim(), cutoff).map_err(fail)?;
    let op = TruncatedOperator::build(kind, &f, &basis, &opts).map_err(fail)?;
    let mu = op.singvals(exec).map_err(fail)?;
    let report = SpectrumReport {
        kind,
        d: f.dim(),
        cutoff,
        dim: op.dim(),
        hs_norm: op.hs_norm(),
        singular_values: mu.values().to_vec(),
    };
    let mut blobs = Vec::new();
    if *s.matrix.get_or_insert(false) {
        let mut bin = Vec::new();
        op.write_binary(&mut bin).map_err(fail)?;
        blobs.push(("matrix.bin".to_string(), bin));
    }
    Ok(Outcome {
        json: envelope("spectrum", &s, &report)?,
        pass: true,
        tables: vec![("spectrum.csv".into(), buffer(|w| write_spectrum_csv(&mu, w))?)],
        blobs,
    })
}
