use std::fs;
use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use serde_json::json;

use werner_core::frames::{parse_rows, MAX_BOXES};
use werner_core::rational::{parse_probability, to_exact_string, to_f64, ExactScalar};
use werner_core::spectral::{mix_spectra, twirl_spectra, SpectralTable};
use werner_core::table::{self, Sweep};
use werner_core::verify::{self, Suite, VerifyConfig};
use werner_core::{
    basic_horn_holds, character, dim_sym, dim_unitary, horn_feasible, lemma_bound_check,
    lr_coefficient, lr_tableaux, lr_via_characters, twirl_spectrum, xy_optimize, CycleType,
    HornTriple, Partition, Shape, YoungFrame,
};

use crate::{Cli, Command, Format, SuiteArg};

/// Largest `n` the dense verification sweeps accept from `--cap-n`.
const VERIFY_CAP: usize = 10;

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let (text, code) = match &cli.command {
        Command::Dims { frame } => (dims(cli, frame)?, ExitCode::SUCCESS),
        Command::Lr {
            lambda,
            mu,
            nu,
            witness,
        } => (lr(cli, lambda, mu, nu, *witness)?, ExitCode::SUCCESS),
        Command::Char { lambda, cycle_type } => (chi(cli, lambda, cycle_type)?, ExitCode::SUCCESS),
        Command::Horn {
            lambda,
            mu,
            nu,
            basic,
            feasible,
        } => (
            horn(cli, lambda, mu, nu, *basic, *feasible)?,
            ExitCode::SUCCESS,
        ),
        Command::Spectrum {
            lambda,
            q,
            k,
            raw,
            include_zeros,
        } => (
            spectrum(cli, lambda, q.as_deref(), *k, *raw, *include_zeros)?,
            ExitCode::SUCCESS,
        ),
        Command::Sweep { lambda, q_grid } => (sweep(cli, lambda, q_grid)?, ExitCode::SUCCESS),
        Command::Xy {
            lambda,
            lambda_prime,
            k,
        } => (xy(cli, lambda, lambda_prime, *k)?, ExitCode::SUCCESS),
        Command::Verify { suite, full } => verify(cli, *suite, *full)?,
    };
    emit(cli, &text)?;
    Ok(code)
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn csv_rows(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn json_text(value: serde_json::Value) -> Result<String> {
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

fn frame(cli: &Cli, text: &str) -> Result<YoungFrame> {
    YoungFrame::parse(text, cli.d).with_context(|| format!("frame \"{text}\""))
}

fn partition(text: &str) -> Result<Partition> {
    let rows = parse_rows(text).with_context(|| format!("partition \"{text}\""))?;
    Ok(Partition::new(rows)?)
}

fn check_n(cli: &Cli, n: usize) -> Result<()> {
    let cap = cli.cap_n.unwrap_or(MAX_BOXES);
    if n > cap {
        bail!("n = {n} exceeds --cap-n {cap}; raise --cap-n (at most {MAX_BOXES})");
    }
    Ok(())
}

fn number(cli: &Cli, value: &ExactScalar) -> String {
    if cli.exact {
        to_exact_string(value)
    } else {
        format!("{:.12}", to_f64(value))
    }
}

fn dims(cli: &Cli, text: &str) -> Result<String> {
    let f = frame(cli, text)?;
    let (fs, fu) = (dim_sym(&f), dim_unitary(&f, cli.d));
    let trace = fs as u128 * fu as u128;
    match cli.format {
        Format::Text => Ok(format!(
            "frame {f}\ndim_sym {fs}\ndim_unitary {fu}\ntrace {trace}\n"
        )),
        Format::Csv => csv_rows(
            &["frame", "d", "dim_sym", "dim_unitary", "trace"],
            &[vec![
                f.to_string(),
                cli.d.to_string(),
                fs.to_string(),
                fu.to_string(),
                trace.to_string(),
            ]],
        ),
        Format::Json => json_text(json!({
            "frame": f.to_string(),
            "d": cli.d,
            "dim_sym": fs,
            "dim_unitary": fu,
            "trace": trace.to_string(),
        })),
    }
}

fn lr(cli: &Cli, lambda: &str, mu: &str, nu: &str, witness: bool) -> Result<String> {
    let (l, m, n) = (partition(lambda)?, partition(mu)?, partition(nu)?);
    let mismatch = l.size() != m.size() + n.size();
    let c = lr_coefficient(&l, &m, &n);
    let via = lr_via_characters(&l, &m, &n).ok();
    let agree = via.map(|v| v == c);
    let tableaux: Vec<String> = if witness {
        lr_tableaux(&l, &m, &n)
            .iter()
            .map(|t| t.to_string())
            .collect()
    } else {
        Vec::new()
    };
    let opt = |v: Option<String>| v.unwrap_or_else(|| "n/a".into());
    match cli.format {
        Format::Text => {
            let mut s = String::new();
            if mismatch {
                s.push_str(&format!(
                    "size mismatch: |λ| = {} but |μ| + |ν| = {}\n",
                    l.size(),
                    m.size() + n.size()
                ));
            }
            s.push_str(&format!("coefficient {c}\n"));
            s.push_str(&format!("characters {}\n", opt(via.map(|v| v.to_string()))));
            s.push_str(&format!("agree {}\n", opt(agree.map(|a| a.to_string()))));
            for t in &tableaux {
                s.push('\n');
                s.push_str(t);
                s.push('\n');
            }
            Ok(s)
        }
        Format::Csv => csv_rows(
            &["lambda", "mu", "nu", "coefficient", "characters", "agree"],
            &[vec![
                l.to_string(),
                m.to_string(),
                n.to_string(),
                c.to_string(),
                opt(via.map(|v| v.to_string())),
                opt(agree.map(|a| a.to_string())),
            ]],
        ),
        Format::Json => json_text(json!({
            "lambda": l.to_string(),
            "mu": m.to_string(),
            "nu": n.to_string(),
            "size_mismatch": mismatch,
            "coefficient": c,
            "characters": via,
            "agree": agree,
            "tableaux": if witness { Some(tableaux) } else { None },
        })),
    }
}

fn chi(cli: &Cli, lambda: &str, cycle_type: &str) -> Result<String> {
    let l = partition(lambda)?;
    let ct = CycleType::new(parse_rows(cycle_type).context("cycle type")?)?;
    let value = character(&l, &ct)?;
    match cli.format {
        Format::Text => Ok(format!("{value}\n")),
        Format::Csv => csv_rows(
            &["lambda", "cycle_type", "character"],
            &[vec![
                l.to_string(),
                ct.partition().to_string(),
                value.to_string(),
            ]],
        ),
        Format::Json => json_text(json!({
            "lambda": l.to_string(),
            "cycle_type": ct.partition().to_string(),
            "character": value,
        })),
    }
}

fn horn(
    cli: &Cli,
    lambda: &str,
    mu: &str,
    nu: &str,
    basic: bool,
    feasible: bool,
) -> Result<String> {
    let t = HornTriple::new(&frame(cli, lambda)?, &frame(cli, mu)?, &frame(cli, nu)?)?;
    let (show_basic, show_feasible) = if basic || feasible {
        (basic, feasible)
    } else {
        (true, true)
    };
    let b = show_basic.then(|| basic_horn_holds(&t));
    let f = show_feasible.then(|| horn_feasible(&t));
    let c = lr_coefficient(t.lambda(), t.mu(), t.nu());
    let cell = |v: Option<bool>| v.map(|b| b.to_string()).unwrap_or_default();
    match cli.format {
        Format::Text => {
            let mut s = String::new();
            if let Some(b) = b {
                s.push_str(&format!("basic_horn {b}\n"));
            }
            if let Some(f) = f {
                s.push_str(&format!("feasible {f}\n"));
            }
            s.push_str(&format!("lr {c}\n"));
            Ok(s)
        }
        Format::Csv => csv_rows(
            &["lambda", "mu", "nu", "basic_horn", "feasible", "lr"],
            &[vec![
                t.lambda().to_string(),
                t.mu().to_string(),
                t.nu().to_string(),
                cell(b),
                cell(f),
                c.to_string(),
            ]],
        ),
        Format::Json => json_text(json!({
            "lambda": t.lambda().to_string(),
            "mu": t.mu().to_string(),
            "nu": t.nu().to_string(),
            "basic_horn": b,
            "feasible": f,
            "lr": c,
        })),
    }
}

fn render_table(cli: &Cli, t: &SpectralTable, include_zeros: bool) -> Result<String> {
    Ok(match cli.format {
        Format::Text => table::to_text(t, include_zeros),
        Format::Csv => table::to_csv(t, include_zeros)?,
        Format::Json => table::to_json(t, include_zeros)? + "\n",
    })
}

fn spectrum(
    cli: &Cli,
    lambda: &str,
    q: Option<&str>,
    k: Option<usize>,
    raw: bool,
    include_zeros: bool,
) -> Result<String> {
    let l = frame(cli, lambda)?;
    check_n(cli, l.n())?;
    let t = match (q, k) {
        (Some(q), _) => {
            let q = parse_probability(q).with_context(|| format!("q = \"{q}\""))?;
            mix_spectra(&twirl_spectra(&l, cli.d, !raw)?, &q)?
        }
        (None, Some(k)) => twirl_spectrum(&l, k, cli.d, !raw)?,
        (None, None) => bail!("one of --q or --k is required"),
    };
    render_table(cli, &t, include_zeros)
}

fn parse_grid(text: &str) -> Result<Vec<(String, ExactScalar)>> {
    let grid: Vec<(String, ExactScalar)> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            parse_probability(s)
                .map(|q| (s.to_string(), q))
                .with_context(|| format!("q = \"{s}\""))
        })
        .collect::<Result<_>>()?;
    if grid.is_empty() {
        bail!("--q-grid is empty");
    }
    Ok(grid)
}

fn sweep(cli: &Cli, lambda: &str, grid: &str) -> Result<String> {
    let l = frame(cli, lambda)?;
    check_n(cli, l.n())?;
    let grid = parse_grid(grid)?;
    let tables = twirl_spectra(&l, cli.d, true)?;
    let columns = grid
        .iter()
        .map(|(_, q)| mix_spectra(&tables, q))
        .collect::<werner_core::Result<Vec<_>>>()?;
    let sweep = Sweep {
        q_labels: grid.into_iter().map(|(s, _)| s).collect(),
        columns,
    };
    match cli.format {
        Format::Csv => Ok(table::sweep_to_csv(&sweep, cli.exact)?),
        Format::Json => Ok(table::sweep_to_json(&sweep)? + "\n"),
        Format::Text => {
            let mut rows: Vec<Vec<String>> = vec![std::iter::once("frame".to_string())
                .chain(sweep.q_labels.iter().map(|q| format!("q={q}")))
                .collect()];
            for (i, (f, _)) in sweep.columns[0].entries().iter().enumerate() {
                rows.push(
                    std::iter::once(f.to_string())
                        .chain(sweep.columns.iter().map(|c| number(cli, &c.entries()[i].1)))
                        .collect(),
                );
            }
            rows.push(
                std::iter::once("mode".to_string())
                    .chain(sweep.modes().into_iter().map(|m| m.unwrap_or_default()))
                    .collect(),
            );
            let widths: Vec<usize> = (0..rows[0].len())
                .map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
                .collect();
            let mut s = String::new();
            for r in rows {
                let cells: Vec<String> = r
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                s.push_str(cells.join("  ").trim_end());
                s.push('\n');
            }
            Ok(s)
        }
    }
}

fn xy(cli: &Cli, lambda: &str, lambda_prime: &str, k: usize) -> Result<String> {
    let (l, lp) = (frame(cli, lambda)?, frame(cli, lambda_prime)?);
    check_n(cli, l.n())?;
    if k > l.n() {
        bail!("k = {k} exceeds n = {}", l.n());
    }
    let r = xy_optimize(&l, &lp, l.n() - k, k, cli.d)?;
    let lemma = (cli.d == 2 && l.length() <= 1 && lp.n() == l.n())
        .then(|| lemma_bound_check(&lp, k))
        .transpose()?;
    let witness = |w: &Option<werner_core::spectral::XyWitness>| {
        w.as_ref()
            .map(|w| format!("μ=({}) ν=({}) γ=({})", w.mu, w.nu, w.gamma))
            .unwrap_or_else(|| "none".into())
    };
    match cli.format {
        Format::Text => {
            let mut s = format!(
                "X {}\nY {}\nargmax {}\nargmin {}\n",
                r.x,
                r.y,
                witness(&r.argmax),
                witness(&r.argmin)
            );
            if let Some(c) = &lemma {
                match c.bound {
                    Some(b) => s.push_str(&format!("entropy_bound {b}\nholds {}\n", c.holds)),
                    None => s.push_str(&format!(
                        "entropy_bound none (λ'₂ > k)\nholds {}\n",
                        c.holds
                    )),
                }
            }
            Ok(s)
        }
        Format::Csv => csv_rows(
            &["lambda", "lambda_prime", "k", "x", "y", "argmax", "argmin"],
            &[vec![
                l.to_string(),
                lp.to_string(),
                k.to_string(),
                r.x.to_string(),
                r.y.to_string(),
                witness(&r.argmax),
                witness(&r.argmin),
            ]],
        ),
        Format::Json => json_text(json!({
            "lambda": l.to_string(),
            "lambda_prime": lp.to_string(),
            "k": k,
            "x": r.x.to_string(),
            "y": r.y.to_string(),
            "argmax": r.argmax,
            "argmin": r.argmin,
            "lemma": lemma,
        })),
    }
}

fn suite(arg: SuiteArg) -> Suite {
    match arg {
        SuiteArg::Thm1 => Suite::Thm1,
        SuiteArg::Thm2 => Suite::Thm2,
        SuiteArg::Lemma => Suite::Lemma,
        SuiteArg::Saturation => Suite::Saturation,
        SuiteArg::Oracle => Suite::Oracle,
        SuiteArg::All => Suite::All,
    }
}

pub fn verify_config(cli: &Cli, arg: SuiteArg, full: bool) -> Result<VerifyConfig> {
    let mut config = if full {
        VerifyConfig::full()
    } else {
        VerifyConfig::default()
    }
    .with_suite(suite(arg));
    config.seed = cli.seed;
    if let Some(n) = cli.cap_n {
        if n == 0 || n > VERIFY_CAP {
            bail!("--cap-n {n} for verify must be between 1 and {VERIFY_CAP}");
        }
        config.d2_max_n = n;
        config.d3_max_n = n.saturating_sub(2).max(1);
        config.expansion_max_n = config.expansion_max_n.min(n);
        config.horn_max_n = n;
        config.lr_max_n = n;
        config.concentration_n = [8, 10].into_iter().filter(|&m| m <= n).collect();
        config.caps.max_group_n = config.caps.max_group_n.max(n);
    }
    Ok(config)
}

fn verify(cli: &Cli, arg: SuiteArg, full: bool) -> Result<(String, ExitCode)> {
    let config = verify_config(cli, arg, full)?;
    let report = verify::run(&config)?;
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => format!("{}passed {}\n", report.summary(), report.passed),
        Format::Csv => {
            let rows: Vec<Vec<String>> = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        c.suite.to_string(),
                        c.informational.to_string(),
                        c.cases.to_string(),
                        c.failures.to_string(),
                    ]
                })
                .collect();
            csv_rows(
                &["check", "suite", "informational", "cases", "failures"],
                &rows,
            )?
        }
    };
    let code = if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    };
    Ok((text, code))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn cli(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("werner").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn grids_keep_their_labels() {
        let grid = parse_grid("0, 1/4,0.5 ,1").unwrap();
        let labels: Vec<&str> = grid.iter().map(|(s, _)| s.as_str()).collect();
        assert_eq!(labels, ["0", "1/4", "0.5", "1"]);
        assert_eq!(grid[2].1, werner_core::rational::ratio(1, 2));
        assert!(parse_grid(" , ").is_err());
        assert!(parse_grid("0,2").is_err());
    }

    #[test]
    fn cap_n_shapes_the_verify_tiers() {
        let c = cli(&["--cap-n", "8", "verify", "oracle"]);
        let config = verify_config(&c, SuiteArg::Oracle, false).unwrap();
        assert_eq!((config.d2_max_n, config.d3_max_n), (8, 6));
        assert_eq!(config.concentration_n, [8]);
        assert_eq!(config.suite, Suite::Oracle);
        let c = cli(&["--seed", "7", "verify"]);
        let config = verify_config(&c, SuiteArg::All, true).unwrap();
        assert_eq!(
            config,
            VerifyConfig {
                seed: 7,
                ..VerifyConfig::full()
            }
        );
    }

    #[test]
    fn q_and_k_are_exclusive() {
        assert!(Cli::try_parse_from(["werner", "spectrum", "4", "--q", "0", "--k", "1"]).is_err());
        assert!(Cli::try_parse_from(["werner", "spectrum", "4"]).is_err());
    }
}
