//! Command-line front end: argument parsing, run configuration and dispatch.

mod suites;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::coeffring::{is_prime, Fq, Ring};
use crate::error::{Error, Result};
use crate::fgl::{default_trunc, honda_fgl, specialize_hazewinkel, Fgl, Specialization};
use crate::report::{ConfigEcho, Recorder, Report};

pub const SEED_ENV: &str = "CHROMALG_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HopfInstance {
    Lambda,
    Cgr,
    Composite,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ComodSuite {
    Equivalence,
    Milnor,
    Assembly,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "chromalg", version, about = "Formal group laws, Hopf algebroids and Milnor operations at finite truncation")]
pub struct Cli {
    /// Odd prime.
    #[arg(long, global = true, default_value_t = 3)]
    pub p: u64,
    /// Height.
    #[arg(long, global = true, default_value_t = 1)]
    pub n: u32,
    /// Degree in X to which isomorphisms are solved.
    #[arg(long, global = true, default_value_t = 10)]
    pub xdeg: u32,
    /// Precision in the uniformizer.
    #[arg(long, global = true, default_value_t = 6)]
    pub uprec: u32,
    /// Seed for sampled checks; overrides CHROMALG_SEED.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Field descriptor such as `Fq(3,2,[2,2,1])` for the law computations.
    #[arg(long, global = true)]
    pub field: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,
    /// Attach wall-clock times to each check.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Formal group laws.
    Fgl {
        #[command(subcommand)]
        action: FglAction,
    },
    /// Isomorphisms from the deformation law to the Honda law.
    Iso {
        #[command(subcommand)]
        action: IsoAction,
    },
    /// Hopf algebroid axioms.
    Hopf {
        #[command(subcommand)]
        action: HopfAction,
    },
    /// Comodule suites.
    Comod {
        #[command(subcommand)]
        action: ComodAction,
    },
    /// Lens and projective models.
    Spaces {
        #[command(subcommand)]
        action: SpacesAction,
    },
    /// Every suite.
    All,
}

#[derive(Clone, Debug, Subcommand)]
pub enum FglAction {
    /// Print the Honda law.
    Honda,
    /// Print a specialization of the universal p-typical law.
    Specialize {
        #[arg(long, value_enum, default_value_t = LawKind::E)]
        law: LawKind,
    },
    /// Print the p-series of a law.
    Pseries {
        #[arg(long, value_enum, default_value_t = LawKind::Honda)]
        law: LawKind,
    },
    /// Print the Honda endomorphism with the given coefficient indices.
    Endo {
        #[arg(long, value_delimiter = ',', required = true)]
        coeffs: Vec<u64>,
    },
    /// Run the law checks.
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum LawKind {
    Honda,
    E,
    K,
}

#[derive(Clone, Debug, Subcommand)]
pub enum IsoAction {
    /// Print the solved isomorphism.
    Solve,
    /// Run the isomorphism checks.
    Check,
}

#[derive(Clone, Debug, Subcommand)]
pub enum HopfAction {
    Check {
        #[arg(long, value_enum)]
        instance: Option<HopfInstance>,
    },
}

#[derive(Clone, Debug, Subcommand)]
pub enum ComodAction {
    Check {
        #[arg(long, value_enum)]
        suite: Option<ComodSuite>,
    },
}

#[derive(Clone, Debug, Subcommand)]
pub enum SpacesAction {
    /// Chern class comparison along the solved isomorphism.
    Chern,
    /// Coaction tables of the lens and projective models.
    Coaction,
}

/// Validated run parameters.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: u64,
    pub n: u32,
    pub xdeg: u32,
    pub uprec: u32,
    pub seed: u64,
    pub field: Option<Fq>,
    pub format: Format,
    pub timings: bool,
}

impl RunConfig {
    pub fn new(p: u64, n: u32) -> Self {
        RunConfig { p, n, xdeg: 10, uprec: 6, seed: 0, field: None, format: Format::Text, timings: false }
    }

    /// Seed precedence: flag, then environment, then 0.
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        let seed = match cli.seed {
            Some(s) => s,
            None => match std::env::var(SEED_ENV) {
                Ok(v) => v.trim().parse().map_err(|_| Error::Config(format!("{SEED_ENV}={v} is not a u64")))?,
                Err(_) => 0,
            },
        };
        let field = cli.field.as_deref().map(Fq::parse_descriptor).transpose()?;
        let cfg = RunConfig {
            p: cli.p,
            n: cli.n,
            xdeg: cli.xdeg,
            uprec: cli.uprec,
            seed,
            field,
            format: cli.format,
            timings: cli.timings,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 2 || !is_prime(self.p) {
            return Err(Error::Config(format!("p = {} is not an odd prime", self.p)));
        }
        if self.n == 0 || self.n > 3 {
            return Err(Error::Config(format!("height n = {} is outside 1..=3", self.n)));
        }
        if self.xdeg == 0 || self.uprec == 0 {
            return Err(Error::Config("xdeg and uprec must be positive".into()));
        }
        if let Some(f) = &self.field {
            if f.p() != self.p {
                return Err(Error::Config(format!("field {} does not have characteristic {}", f.descriptor(), self.p)));
            }
        }
        Ok(())
    }

    /// The selected field if it contains `F_(p^k)`, else the default field for the height.
    pub fn field(&self, k: u32) -> Result<Fq> {
        match &self.field {
            Some(f) if f.degree() % k == 0 => Ok(f.clone()),
            Some(f) => Err(Error::Config(format!("field {} does not contain F_({}^{k})", f.descriptor(), self.p))),
            None => Fq::for_heights(self.p, self.n),
        }
    }

    fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            p: self.p,
            n: self.n,
            xdeg: self.xdeg,
            uprec: self.uprec,
            seed: self.seed,
            field: self.field.as_ref().map(|f| f.descriptor()),
        }
    }

    fn recorder(&self, suite: &str) -> Recorder {
        Recorder::new(suite, self.seed, self.timings)
    }
}

/// Output of a run and whether every check passed.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub output: String,
    pub ok: bool,
}

/// Runs one suite and returns its report.
pub fn report(cfg: &RunConfig, command: &Command) -> Result<Option<Report>> {
    let mut rec;
    match command {
        Command::Fgl { action: FglAction::Check } => {
            rec = cfg.recorder("fgl");
            suites::fgl(&mut rec, cfg);
        }
        Command::Iso { action: IsoAction::Check } => {
            rec = cfg.recorder("iso");
            suites::iso(&mut rec, cfg);
        }
        Command::Hopf { action: HopfAction::Check { instance } } => {
            rec = cfg.recorder("hopf");
            suites::hopf(&mut rec, cfg, *instance);
        }
        Command::Comod { action: ComodAction::Check { suite } } => {
            rec = cfg.recorder("comod");
            suites::comod(&mut rec, cfg, *suite);
        }
        Command::Spaces { action: SpacesAction::Chern } => {
            rec = cfg.recorder("spaces.chern");
            suites::chern(&mut rec, cfg);
        }
        Command::Spaces { action: SpacesAction::Coaction } => {
            rec = cfg.recorder("spaces.coaction");
            suites::coaction(&mut rec, cfg);
        }
        Command::All => {
            rec = cfg.recorder("all");
            let parts: [(&str, fn(&mut Recorder, &RunConfig)); 6] = [
                ("fgl", suites::fgl),
                ("iso", suites::iso),
                ("hopf", |r, c| suites::hopf(r, c, None)),
                ("comod", |r, c| suites::comod(r, c, None)),
                ("chern", suites::chern),
                ("coaction", suites::coaction),
            ];
            for (name, f) in parts {
                let mut sub = cfg.recorder(name);
                f(&mut sub, cfg);
                rec.absorb(sub);
            }
        }
        _ => return Ok(None),
    }
    Ok(Some(rec.finish(cfg.echo())))
}

fn law(cfg: &RunConfig, kind: LawKind) -> Result<Fgl<Fq>> {
    let fq = cfg.field(cfg.n)?;
    let t = default_trunc(cfg.p, cfg.n);
    match kind {
        LawKind::Honda => honda_fgl(cfg.n, &fq, t),
        LawKind::E => specialize_hazewinkel(&Specialization::e_law(cfg.p, cfg.n), &fq, t),
        LawKind::K => specialize_hazewinkel(&Specialization::k_law(cfg.p, cfg.n), &fq, t),
    }
}

fn series_dump(cfg: &RunConfig, what: &str, f: &Fgl<Fq>, ring: &crate::gseries::SeriesRing<Fq>, s: &crate::gseries::Series<u32>) -> String {
    match cfg.format {
        Format::Text => format!("{what} over {}\n{}\n", f.base().descriptor(), ring.render(s)),
        Format::Json => {
            let v = json!({
                "kind": what,
                "p": cfg.p,
                "n": cfg.n,
                "field": f.base().descriptor(),
                "trunc": f.trunc(),
                "series": ring.to_json(s),
            });
            serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
        }
    }
}

/// Renders the non-report verbs.
fn dump(cfg: &RunConfig, command: &Command) -> Result<String> {
    match command {
        Command::Fgl { action: FglAction::Honda } => {
            let f = law(cfg, LawKind::Honda)?;
            Ok(series_dump(cfg, "honda_law", &f, f.ring2(), f.law()))
        }
        Command::Fgl { action: FglAction::Specialize { law: kind } } => {
            let f = law(cfg, *kind)?;
            Ok(series_dump(cfg, "law", &f, f.ring2(), f.law()))
        }
        Command::Fgl { action: FglAction::Pseries { law: kind } } => {
            let f = law(cfg, *kind)?;
            Ok(series_dump(cfg, "p_series", &f, &f.ring1(), &f.p_series()?))
        }
        Command::Fgl { action: FglAction::Endo { coeffs } } => {
            let f = law(cfg, LawKind::Honda)?;
            let fq = f.base().clone();
            if let Some(&bad) = coeffs.iter().find(|&&c| c >= fq.size()) {
                return Err(Error::Config(format!("coefficient index {bad} is outside {}", fq.descriptor())));
            }
            let a: Vec<u32> = coeffs.iter().map(|&c| fq.from_index(c)).collect();
            let e = f.honda_endo(&a)?;
            Ok(series_dump(cfg, "honda_endo", &f, &f.ring1(), &e.series))
        }
        Command::Iso { action: IsoAction::Solve } => {
            let s = suites::solve(cfg)?;
            let iso = &s.iso;
            Ok(match cfg.format {
                Format::Text => {
                    let mut out = format!("tower {}\n", iso.tower.descriptor());
                    for st in &iso.steps {
                        out += &format!("{}\n", serde_json::to_string(st).expect("steps serialize"));
                    }
                    out + &format!("phi = {}\n", iso.ring1.render(&iso.phi))
                }
                Format::Json => {
                    let v = json!({
                        "kind": "isomorphism",
                        "p": cfg.p,
                        "n": cfg.n,
                        "trunc": iso.trunc,
                        "tower": iso.tower.descriptor(),
                        "steps": iso.steps,
                        "phi": iso.ring1.to_json(&iso.phi),
                    });
                    serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
                }
            })
        }
        _ => Err(Error::Config("not a dump verb".into())),
    }
}

/// Runs a parsed command. Module errors inside suites become failed checks;
/// errors returned here come from configuration or from the dump verbs.
pub fn run(cfg: &RunConfig, command: &Command) -> Result<Outcome> {
    if let Some(rep) = report(cfg, command)? {
        let output = match cfg.format {
            Format::Text => rep.to_text(),
            Format::Json => rep.to_json() + "\n",
        };
        return Ok(Outcome { output, ok: rep.ok() });
    }
    Ok(Outcome { output: dump(cfg, command)?, ok: true })
}

/// Entry point for the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let cfg = match RunConfig::from_cli(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("chromalg: {e}");
            return 2;
        }
    };
    match run(&cfg, &cli.command) {
        Ok(out) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &out.output) {
                    eprintln!("chromalg: cannot write {}: {e}", path.display());
                    return 2;
                }
            } else {
                print!("{}", out.output);
            }
            i32::from(!out.ok)
        }
        Err(e) => {
            eprintln!("chromalg: {e}");
            if matches!(e, Error::Config(_)) {
                2
            } else {
                1
            }
        }
    }
}
