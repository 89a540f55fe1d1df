use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nanokh::bracket::{bracket, bracket_general, jhat, jhat_q, jones, BracketError};
use nanokh::homotopy::{applicable_moves, parse_log, random_walk, replay, HomotopyData, Move, WalkOptions};
use nanokh::khovanov::{ChainComplex, KhError, KhTable};
use nanokh::smoothing::{resolve_checked, trace, SmoothingError, State};
use nanokh::ul::{invariant_bundle, subset_label, u_l, Crs};
use nanokh::{parse_phrase, LaurentPoly, Nanophrase};

#[derive(Parser)]
#[command(name = "nanokh", version, about = "Bracket, Jones polynomial and mod-2 Khovanov homology of nanophrases")]
struct Cli {
    /// Worker threads for state enumeration (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Refuse Khovanov computations above this many letters.
    #[arg(long, global = true, default_value_t = nanokh::khovanov::DEFAULT_MAX_LETTERS)]
    max_letters: usize,
    /// Print the smoothing rewrite sequence of every state to stderr.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Parse and validate a phrase file.
    Validate { file: PathBuf },
    /// Bracket polynomial in t, or in t, u, d with --general.
    Bracket {
        file: PathBuf,
        #[arg(long)]
        general: bool,
    },
    /// Jones polynomial in t.
    Jones { file: PathBuf },
    /// Ĵ in q, or in t with --t.
    Jhat {
        file: PathBuf,
        #[arg(long)]
        t: bool,
    },
    /// Khovanov homology table.
    Kh {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = TableFormat::Tsv)]
        table: TableFormat,
    },
    /// Compare Ĵ with the Euler characteristics of the chain complex and of homology.
    EulerCheck { file: PathBuf },
    /// List applicable moves, or replay a move log.
    Moves {
        file: PathBuf,
        #[arg(long)]
        replay: Option<PathBuf>,
        #[command(flatten)]
        homotopy: HomotopyArgs,
    },
    /// Seeded random walks re-verifying the invariants after every step.
    Fuzz {
        file: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        walks: usize,
        #[arg(long, default_value_t = nanokh::homotopy::DEFAULT_LETTER_BUDGET)]
        letter_budget: usize,
        #[command(flatten)]
        homotopy: HomotopyArgs,
    },
    /// The pseudolink U_L(P).
    Ul {
        file: PathBuf,
        #[arg(long = "L", value_delimiter = ',', required = true)]
        l: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        crs: Vec<String>,
    },
    /// An invariant of U_L(P) for every nonempty L.
    Bundle {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Invariant::Kh)]
        inv: Invariant,
        #[arg(long, value_delimiter = ',')]
        crs: Vec<String>,
    },
    /// Compare Ĵ and Khovanov homology of two phrases.
    Distinguish { first: PathBuf, second: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Tsv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Invariant {
    Kh,
    Jhat,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    S1,
    S0,
    Diagonal,
}

#[derive(Args)]
struct HomotopyArgs {
    /// Homotopy data; S₁ for pseudolinks and the diagonal otherwise by default.
    #[arg(long, value_enum)]
    homotopy: Option<Preset>,
    /// Disable shifts and permutations.
    #[arg(long)]
    no_shifts: bool,
}

impl HomotopyArgs {
    fn data(&self, p: &Nanophrase) -> Result<HomotopyData, Failure> {
        let preset = self.homotopy.unwrap_or(if p.is_pseudolink() { Preset::S1 } else { Preset::Diagonal });
        match preset {
            Preset::Diagonal => Ok(HomotopyData::diagonal(p.alphabet().clone())),
            _ if !p.is_pseudolink() => Err(Failure::Input("S₁ and S₀ are defined over {1, -1} only".into())),
            Preset::S1 => Ok(HomotopyData::s1()),
            Preset::S0 => Ok(HomotopyData::s0()),
        }
    }
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<BracketError> for Failure {
    fn from(e: BracketError) -> Self {
        match e {
            BracketError::Smoothing(SmoothingError::OrderDependence) | BracketError::OddExponent(_) => {
                Failure::Internal(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<KhError> for Failure {
    fn from(e: KhError) -> Self {
        match e {
            KhError::Smoothing(SmoothingError::OrderDependence)
            | KhError::NonIntegral
            | KhError::Bidegree
            | KhError::SquareNonZero { .. }
            | KhError::DifferentPhrase => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn input<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn load(path: &Path) -> Result<Nanophrase, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_phrase(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn print_trace(p: &Nanophrase) -> Result<(), Failure> {
    if p.is_empty() || !p.is_pseudolink() {
        return Ok(());
    }
    let n = p.letter_count();
    let states = 1u64.checked_shl(n as u32).ok_or_else(|| input("too many letters to trace"))?;
    for m in 0..states {
        let s = State::from_mask(m, n).map_err(input)?;
        let markers: Vec<String> = p
            .letters()
            .iter()
            .enumerate()
            .map(|(k, l)| format!("{}{}", l.name, if m >> k & 1 == 1 { '+' } else { '-' }))
            .collect();
        eprintln!("state {}", markers.join(" "));
        for line in trace(p, s).map_err(|e| Failure::from(KhError::from(e)))? {
            eprintln!("  {line}");
        }
    }
    Ok(())
}

fn khovanov(p: &Nanophrase, cap: usize) -> Result<(ChainComplex, KhTable), Failure> {
    let c = ChainComplex::build(p, cap)?;
    c.check_square_zero()?;
    let h = c.homology();
    Ok((c, h))
}

fn polynomial_line(p: &LaurentPoly) -> String {
    format!("{p}\n")
}

fn run(cli: Cli) -> Result<String, Failure> {
    let cap = cli.max_letters;
    let mut out = String::new();
    match cli.verb {
        Verb::Validate { file } => {
            let p = load(&file)?;
            let kind = if p.is_pseudolink() { "pseudolink" } else { "nanophrase" };
            writeln!(out, "ok: {kind} with {} letters in {} words", p.letter_count(), p.len()).unwrap();
            if p.is_pseudolink() && !p.is_empty() && p.letter_count() <= cap {
                let n = p.letter_count();
                for m in 0..1u64 << n {
                    let s = State::from_mask(m, n).map_err(input)?;
                    resolve_checked(&p, s).map_err(|e| Failure::from(KhError::from(e)))?;
                }
                writeln!(out, "ok: all {} states resolve independently of deletion order", 1u64 << n).unwrap();
            }
        }
        Verb::Bracket { file, general } => {
            let p = load(&file)?;
            if cli.trace {
                print_trace(&p)?;
            }
            let b = if general { bracket_general(&p)? } else { bracket(&p)? };
            out += &polynomial_line(&b);
        }
        Verb::Jones { file } => {
            let p = load(&file)?;
            if cli.trace {
                print_trace(&p)?;
            }
            out += &polynomial_line(&jones(&p)?);
        }
        Verb::Jhat { file, t } => {
            let p = load(&file)?;
            if cli.trace {
                print_trace(&p)?;
            }
            out += &polynomial_line(&if t { jhat(&p)? } else { jhat_q(&p)? });
        }
        Verb::Kh { file, table: TableFormat::Tsv } => {
            let p = load(&file)?;
            if cli.trace {
                print_trace(&p)?;
            }
            out += &khovanov(&p, cap)?.1.to_string();
        }
        Verb::EulerCheck { file } => {
            let p = load(&file)?;
            let j = jhat_q(&p)?;
            let (c, h) = khovanov(&p, cap)?;
            let (ce, he) = (c.euler_characteristic(), h.euler_characteristic());
            writeln!(out, "jhat_q\t{j}").unwrap();
            writeln!(out, "chain\t{ce}").unwrap();
            writeln!(out, "homology\t{he}").unwrap();
            if j == ce && j == he {
                out += "PASS\n";
            } else {
                print!("{out}");
                return Err(Failure::Internal("Euler characteristic identity fails".into()));
            }
        }
        Verb::Moves { file, replay: log, homotopy } => {
            let p = load(&file)?;
            let h = homotopy.data(&p)?;
            match log {
                None => {
                    for m in applicable_moves(&p, &h) {
                        if homotopy.no_shifts && matches!(m, Move::Shift { .. } | Move::Permute { .. }) {
                            continue;
                        }
                        writeln!(out, "{m}").unwrap();
                    }
                }
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
                    let moves = parse_log(&text).map_err(input)?;
                    let steps = replay(&p, &moves, &h)
                        .map_err(|(k, e)| Failure::Input(format!("move {} `{}`: {e}", k + 1, moves[k])))?;
                    if cli.trace {
                        for (m, q) in moves.iter().zip(&steps) {
                            eprintln!("{m}\t{}", q.phrase_string());
                        }
                    }
                    out += &steps.last().unwrap_or(&p).to_string();
                }
            }
        }
        Verb::Fuzz { file, seed, steps, walks, letter_budget, homotopy } => {
            let p = load(&file)?;
            let h = homotopy.data(&p)?;
            let expected = Invariants::of(&p, cap)?;
            for k in 0..walks as u64 {
                let opts = WalkOptions {
                    steps,
                    seed: seed.wrapping_add(k),
                    allow_shifts: !homotopy.no_shifts,
                    letter_budget,
                };
                let (_, log) = random_walk(&p, &h, opts);
                let mut cur = p.clone();
                for (step, m) in log.iter().enumerate() {
                    cur = nanokh::apply_move(&cur, m, &h).map_err(|e| Failure::Internal(e.to_string()))?;
                    let got = Invariants::of(&cur, cap)?;
                    if got != expected {
                        print!("{out}");
                        println!("walk seed {} diverges at step {}: {}", opts.seed, step + 1, got.diff(&expected));
                        println!("# move log");
                        for m in &log[..=step] {
                            println!("{m}");
                        }
                        return Err(Failure::Internal("invariant changed under a move".into()));
                    }
                }
                writeln!(out, "walk seed {}: {} moves, invariants preserved", opts.seed, log.len()).unwrap();
            }
            out += "PASS\n";
        }
        Verb::Ul { file, l, crs } => {
            let p = load(&file)?;
            let crs = Crs::with_choices(p.alphabet(), &crs).map_err(input)?;
            let l = crs.subset(&l).map_err(input)?;
            out += &u_l(&p, &l, &crs).map_err(input)?.to_string();
        }
        Verb::Bundle { file, inv, crs } => {
            let p = load(&file)?;
            let crs = Crs::with_choices(p.alphabet(), &crs).map_err(input)?;
            let bundle = invariant_bundle(&p, &crs, |u| -> Result<String, Failure> {
                Ok(match inv {
                    Invariant::Kh => khovanov(u, cap)?.1.to_string(),
                    Invariant::Jhat => polynomial_line(&jhat_q(u)?),
                })
            })
            .map_err(input)?;
            let mut first = true;
            for (names, text) in bundle {
                if !first {
                    out.push('\n');
                }
                first = false;
                writeln!(out, "{}", subset_label(&names)).unwrap();
                out += &text?;
            }
        }
        Verb::Distinguish { first, second } => {
            let (p, q) = (load(&first)?, load(&second)?);
            let (jp, jq) = (jhat_q(&p)?, jhat_q(&q)?);
            if jp == jq {
                writeln!(out, "jhat_q: equal\t{jp}").unwrap();
            } else {
                writeln!(out, "jhat_q: differ\t{jp}\t{jq}").unwrap();
            }
            let (hp, hq) = (khovanov(&p, cap)?.1, khovanov(&q, cap)?.1);
            match hp.first_difference(&hq) {
                None => out += "kh: equal\n",
                Some((i, j, a, b)) => writeln!(out, "kh: differ at ({i},{j})\t{a}\t{b}").unwrap(),
            }
        }
    }
    Ok(out)
}

#[derive(PartialEq, Eq)]
struct Invariants {
    jones: LaurentPoly,
    jhat_q: LaurentPoly,
    kh: KhTable,
}

impl Invariants {
    fn of(p: &Nanophrase, cap: usize) -> Result<Self, Failure> {
        Ok(Self { jones: jones(p)?, jhat_q: jhat_q(p)?, kh: khovanov(p, cap)?.1 })
    }

    fn diff(&self, other: &Self) -> String {
        if self.jones != other.jones {
            format!("jones {} != {}", self.jones, other.jones)
        } else if self.jhat_q != other.jhat_q {
            format!("jhat_q {} != {}", self.jhat_q, other.jhat_q)
        } else {
            let (i, j, a, b) = self.kh.first_difference(&other.kh).unwrap_or_default();
            format!("kh at ({i},{j}) {a} != {b}")
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("internal error: {m}");
            ExitCode::from(2)
        }
    }
}
