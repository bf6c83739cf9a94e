//! `fourrank`: command-line access to predictions, candidate sets, class groups
//! and batch reports.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fourrank::classgroup::{self, ClassGroupConfig, FieldSpec};
use fourrank::moments::{self, output, Baselines, SampleSpec};
use fourrank::{selmer, Error, QuadraticField};

const EXIT_DOMAIN: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "fourrank",
    version,
    about = "4-ranks of class groups of K(sqrt n)"
)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "FOURRANK_THREADS")]
    threads: Option<usize>,

    /// Write CSV here (and a JSON mirror next to it) instead of printing CSV.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Oracle budget: element trials per class-group computation.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Baselines file for threshold comparisons (defaults to the bundled one).
    #[arg(long, global = true)]
    fixture: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct FieldN {
    #[arg(long, allow_negative_numbers = true)]
    z: i64,
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
}

#[derive(Args, Debug)]
struct FieldX {
    #[arg(long, allow_negative_numbers = true)]
    z: i64,
    #[arg(long)]
    xmax: u64,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Closed-form 4-rank of Cl(K(sqrt n)).
    Predict(FieldN),
    /// Candidate set for X_n (or Y_n with --dual).
    Candidates {
        #[command(flatten)]
        f: FieldN,
        #[arg(long)]
        dual: bool,
    },
    /// Dimension of the Selmer group (generic n only).
    Seldim(FieldN),
    /// Class group of a quadratic ("z") or biquadratic ("m:n") field.
    Classgroup {
        #[arg(long, allow_hyphen_values = true)]
        spec: String,
    },
    /// Set-size sums and trivial fractions at each power of ten up to --xmax.
    Moments(FieldX),
    /// Prediction against the oracle for squarefree 1 < |n| <= --nmax.
    Campaign {
        #[arg(long, allow_negative_numbers = true)]
        z: i64,
        #[arg(long)]
        nmax: u64,
        /// odd, all, odd-both or all-both.
        #[arg(long, default_value = "odd")]
        sample: String,
    },
    /// Empirical distribution of the predicted 4-rank against the normal CDF.
    Ek(FieldX),
    /// Averages of omega_inert.
    Turan(FieldX),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(EXIT_USAGE);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .expect("thread pool is built once");
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(match e {
                Error::Resource { .. } => EXIT_RESOURCE,
                _ => EXIT_DOMAIN,
            })
        }
    }
}

fn oracle_config(cli: &Cli) -> ClassGroupConfig {
    let mut cfg = ClassGroupConfig::default();
    if let Some(b) = cli.budget {
        cfg.max_trials = b;
    }
    cfg
}

fn field_with_cl(z: i64, cli: &Cli) -> fourrank::Result<QuadraticField> {
    QuadraticField::with_class_group(z, &oracle_config(cli))
}

fn baselines(cli: &Cli) -> fourrank::Result<Baselines> {
    match &cli.fixture {
        Some(p) => Baselines::load(p),
        None => Ok(Baselines::bundled()),
    }
}

fn json_path(p: &Path) -> PathBuf {
    p.with_extension("json")
}

/// CSV to `--out` (plus the JSON mirror) or to stdout.
fn emit<T: output::Table>(cli: &Cli, rows: &[T]) -> fourrank::Result<()> {
    match &cli.out {
        Some(p) => {
            output::write_csv(rows, BufWriter::new(File::create(p)?))?;
            output::write_json(rows, BufWriter::new(File::create(json_path(p))?))?;
        }
        None => output::write_csv(rows, io::stdout().lock())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> fourrank::Result<()> {
    let mut stdout = io::stdout().lock();
    match &cli.cmd {
        Cmd::Predict(a) => {
            let k = field_with_cl(a.z, cli)?;
            writeln!(stdout, "{}", selmer::predicted_rk4(&k, a.n)?)?;
        }
        Cmd::Candidates { f, dual } => {
            let k = QuadraticField::new(f.z)?;
            let set = if *dual {
                selmer::yn_candidates(&k, f.n)?
            } else {
                selmer::xn_candidates(&k, f.n)?
            };
            writeln!(stdout, "{set}")?;
        }
        Cmd::Seldim(a) => {
            let k = QuadraticField::new(a.z)?;
            writeln!(stdout, "{}", selmer::sel_dim_formula(&k, a.n)?)?;
        }
        Cmd::Classgroup { spec } => {
            let spec: FieldSpec = spec.parse()?;
            let res = classgroup::class_group(&spec.order()?, &oracle_config(cli))?;
            let rec = classgroup::io::ClassGroupRecord::from(&res);
            match &cli.out {
                Some(p) => {
                    classgroup::io::write_records(&[rec], BufWriter::new(File::create(p)?))?;
                    let json = serde_json::json!([{
                        "field_spec": res.spec.to_string(),
                        "disc": res.disc.to_string(),
                        "invariant_factors": res.group.to_string(),
                        "status": res.status.to_string(),
                    }]);
                    let mut w = BufWriter::new(File::create(json_path(p))?);
                    serde_json::to_writer_pretty(&mut w, &json).map_err(io::Error::other)?;
                    writeln!(w)?;
                }
                None => writeln!(stdout, "{} {}", res.group, res.status)?,
            }
        }
        Cmd::Moments(a) => {
            let k = QuadraticField::new(a.z)?;
            let mut xs: Vec<u64> = std::iter::successors(Some(100u64), |x| x.checked_mul(10))
                .take_while(|&x| x <= a.xmax)
                .collect();
            if xs.last() != Some(&a.xmax) {
                xs.push(a.xmax);
            }
            let reports = moments::moment_report(&k, &xs)?;
            let rows: Vec<_> = reports.iter().map(|r| r.row()).collect();
            emit(cli, &rows)?;
            let base = baselines(cli)?;
            for r in &reports {
                if let Some(b) = base.trivial_fraction(a.z, r.x) {
                    eprintln!(
                        "X = {}: both sets trivial for {:.6} (baseline {:.6})",
                        r.x,
                        r.frac_trivial_both(),
                        b.frac_trivial_both
                    );
                }
            }
        }
        Cmd::Campaign { z, nmax, sample } => {
            let k = field_with_cl(*z, cli)?;
            let (odd_only, include_negative) = match sample.as_str() {
                "odd" => (true, false),
                "all" => (false, false),
                "odd-both" => (true, true),
                "all-both" => (false, true),
                other => {
                    return Err(Error::Domain(format!(
                        "--sample {other:?}: expected odd, all, odd-both or all-both"
                    )))
                }
            };
            let spec = SampleSpec {
                nmax: *nmax,
                odd_only,
                include_negative,
            };
            let rep = moments::verify_campaign(&k, &spec, &oracle_config(cli))?;
            emit(cli, &rep.rows)?;
            let rate = rep
                .agreement_rate()
                .map_or("n/a".to_string(), |r| format!("{r:.4}"));
            eprintln!(
                "generic rows checked: {}, agreeing: {}, rate: {rate}, rejected n: {:?}",
                rep.generic_checked, rep.generic_agreeing, rep.rejected
            );
        }
        Cmd::Ek(a) => {
            let k = field_with_cl(a.z, cli)?;
            let rep = moments::erdos_kac_report(&k, a.xmax, &moments::default_z_grid())?;
            emit(cli, &rep.rows)?;
            let base = baselines(cli)?;
            match base.erdos_kac(a.z, a.xmax) {
                Some(b) => eprintln!(
                    "sup distance {:.6} (baseline {:.6})",
                    rep.sup_distance, b.sup_distance
                ),
                None => eprintln!("sup distance {:.6}", rep.sup_distance),
            }
        }
        Cmd::Turan(a) => {
            let k = QuadraticField::new(a.z)?;
            let rep = moments::turan_report(&k, a.xmax)?;
            emit(cli, std::slice::from_ref(&rep))?;
        }
    }
    stdout.flush()?;
    Ok(())
}
