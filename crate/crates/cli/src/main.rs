mod cache;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use serde::Serialize;

use ddca_core::cherednik::{CherednikAlgebra, ElementJson, SlotMatrix};
use ddca_core::guay::{admissible_indices, verify_k_extraction, verify_main_relation, DeltaTerm};
use ddca_core::interp::{specialize, StructureConstantTable, StructureConstants, TableJson};
use ddca_core::report::{all_passed, VerificationReport};
use ddca_core::spherical::{SphericalAlgebra, SphericalJson, TExpansion, TIndex};
use ddca_core::symcomb::{content, interpolated_omega_value, pad};
use ddca_core::vlrep::{verify_commuting_square, verify_relations};
use ddca_core::{ParamPoly, Rational, YoungDiagram};

use cache::{write_atomic, Source, TableCache};
use error::{CliError, EXIT_OK, EXIT_VERIFICATION_FAILED};

#[derive(Parser)]
#[command(name = "ddca", version, about = "Exact computations in extended rational Cherednik algebras and the deformed double current algebra")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Indented JSON.
    #[arg(long, global = true)]
    pretty: bool,
    /// Structure-constant table cache.
    #[arg(long, global = true, env = "DDCA_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Ignore the cache entirely.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Params {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    /// Specialize t in the output, as `p/q`.
    #[arg(long)]
    t: Option<String>,
    /// Specialize k in the output, as `p/q`.
    #[arg(long)]
    k: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Product of two elements of H_{t,k}(n, r).
    Mul {
        #[command(flatten)]
        params: Params,
        /// Element JSON, inline or `@file`.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// e·a·e as a spherical element.
    Sandwich {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        a: String,
    },
    /// The generator T_{p,q}(g).
    Tgen {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        p: u8,
        #[arg(long)]
        q: u8,
        /// Matrix label (`"id"`, `[a,b]`) or rows `[[..],..]` with rational entries.
        #[arg(long)]
        g: String,
    },
    /// Expansion in the T_n(m) basis of a spherical element or of T_n(m).
    Expand {
        #[command(flatten)]
        params: Params,
        /// Spherical element JSON, inline or `@file`.
        #[arg(long, conflicts_with = "m", required_unless_present = "m")]
        element: Option<String>,
        /// T-index `[[p,q,label,mult],..]`; expands the product with `--m2` if given.
        #[arg(long)]
        m: Option<String>,
        #[arg(long, requires = "m")]
        m2: Option<String>,
    },
    /// Structure-constant tables with coefficients polynomial in K.
    StructureConstants {
        #[arg(long)]
        r: usize,
        #[arg(long, requires = "m2")]
        m1: Option<String>,
        #[arg(long, requires = "m1")]
        m2: Option<String>,
        /// Sweep all pairs with w(m1) + w(m2) <= max-weight.
        #[arg(long, conflicts_with = "m1", required_unless_present = "m1")]
        max_weight: Option<u32>,
        /// Bound on |m1| + |m2| in a sweep.
        #[arg(long, default_value_t = 3)]
        max_size: usize,
    },
    /// Evaluates a table at K = nu.
    Specialize {
        /// Table JSON file.
        #[arg(long)]
        table: PathBuf,
        #[arg(long)]
        nu: String,
    },
    /// Guay's relation and the K-extraction identities in B_{t,k}(n, r).
    VerifyGuay {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, conflicts_with = "indices")]
        all_indices: bool,
        /// One index tuple `a,b,c,d` (one-based).
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<usize>>,
        /// Use the δ_ad E_bc term instead of δ_ad E_cb.
        #[arg(long)]
        printed_delta: bool,
        #[arg(long)]
        k_extraction: bool,
    },
    /// Relations on W_l and the commuting square on V_l.
    VerifyVl {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Random checks of the interpolated Ω value against padded contents.
    ContentCheck {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ExpansionJson {
    n: Option<usize>,
    r: usize,
    terms: Vec<(TIndex, ParamPoly)>,
}

fn expansion_json(n: Option<usize>, r: usize, e: &TExpansion<ParamPoly>) -> ExpansionJson {
    ExpansionJson { n, r, terms: e.iter().map(|(m, c)| (m.clone(), c.clone())).collect() }
}

/// Reads `@file` or returns the argument itself.
fn inline_or_file(s: &str) -> Result<String, CliError> {
    match s.strip_prefix('@') {
        Some(path) => Ok(std::fs::read_to_string(path)?),
        None => Ok(s.to_string()),
    }
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    s.parse().map_err(|e| CliError::Input(format!("rational `{s}`: {e}")))
}

fn parse_index(s: &str) -> Result<TIndex, CliError> {
    serde_json::from_str(&inline_or_file(s)?).map_err(|e| CliError::Input(format!("T-index `{s}`: {e}")))
}

fn parse_matrix(s: &str, r: usize) -> Result<SlotMatrix, CliError> {
    if let Ok(label) = serde_json::from_str::<ddca_core::cherednik::MatrixBasisLabel>(s) {
        if !label.is_valid_for(r) {
            return Err(CliError::Input(format!("label {label} for r = {r}")));
        }
        return Ok(label.to_matrix(r));
    }
    let rows: Vec<Vec<serde_json::Value>> = serde_json::from_str(s).map_err(|e| CliError::Input(format!("matrix `{s}`: {e}")))?;
    let rows = rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| match v {
                    serde_json::Value::String(s) => parse_rational(&s),
                    serde_json::Value::Number(n) => parse_rational(&n.to_string()),
                    other => Err(CliError::Input(format!("matrix entry {other}"))),
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let m = SlotMatrix::from_rows(&rows)?;
    if m.r() != r {
        return Err(CliError::Input(format!("matrix of size {} for r = {r}", m.r())));
    }
    Ok(m)
}

impl Params {
    fn point(&self) -> Result<(Option<Rational>, Option<Rational>), CliError> {
        Ok((self.t.as_deref().map(parse_rational).transpose()?, self.k.as_deref().map(parse_rational).transpose()?))
    }

    fn specializer(&self) -> Result<impl Fn(&ParamPoly) -> ParamPoly, CliError> {
        let (t, k) = self.point()?;
        Ok(move |c: &ParamPoly| c.substitute(t.as_ref(), k.as_ref(), None))
    }
}

struct Output {
    pretty: bool,
    out: Option<PathBuf>,
}

impl Output {
    fn emit<T: Serialize>(&self, value: &T) -> Result<(), CliError> {
        let mut bytes = if self.pretty { serde_json::to_vec_pretty(value)? } else { serde_json::to_vec(value)? };
        bytes.push(b'\n');
        match &self.out {
            Some(path) => write_atomic(path, &bytes),
            None => {
                use std::io::Write;
                std::io::stdout().write_all(&bytes)?;
                Ok(())
            }
        }
    }
}

fn emit_reports(out: &Output, reports: &[VerificationReport]) -> Result<u8, CliError> {
    out.emit(&reports)?;
    let failed = reports.iter().filter(|r| !r.passed()).count();
    eprintln!("{} checks, {failed} failed", reports.len());
    Ok(if all_passed(reports) { EXIT_OK } else { EXIT_VERIFICATION_FAILED })
}

fn sweep_pairs(r: usize, max_weight: u32, max_size: usize) -> Vec<(TIndex, TIndex)> {
    let idx: Vec<TIndex> = TIndex::enumerate(r, max_weight, max_size.saturating_sub(1)).into_iter().filter(|m| !m.is_empty()).collect();
    let mut pairs = Vec::new();
    for a in &idx {
        for b in &idx {
            if a.weight() + b.weight() <= max_weight && a.size() + b.size() <= max_size {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    pairs
}

fn tables(cli: &Cli, r: usize, pairs: &[(TIndex, TIndex)]) -> Result<Vec<StructureConstantTable>, CliError> {
    use rayon::prelude::*;
    let sc = StructureConstants::new(r);
    let cache = match (&cli.cache_dir, cli.no_cache) {
        (Some(dir), false) => Some(TableCache::new(dir)?),
        _ => None,
    };
    pairs
        .par_iter()
        .map(|(m1, m2)| match &cache {
            Some(c) => {
                let (t, src) = c.get_or_compute(&sc, m1, m2)?;
                if src == Source::Cache {
                    eprintln!("cache hit for {m1}·{m2}");
                }
                Ok(t)
            }
            None => Ok((*sc.table(m1, m2)?).clone()),
        })
        .collect()
}

fn run(cli: &Cli) -> Result<u8, CliError> {
    let out = Output { pretty: cli.pretty, out: cli.out.clone() };
    match &cli.command {
        Command::Mul { params, a, b } => {
            let h = CherednikAlgebra::symbolic(params.n, params.r)?;
            let parse = |s: &str| -> Result<_, CliError> {
                let json: ElementJson = serde_json::from_str(&inline_or_file(s)?)?;
                Ok(json.into_element()?)
            };
            let prod = h.mul(&parse(a)?, &parse(b)?)?;
            out.emit(&prod.map_coeffs(params.specializer()?).to_json())?;
        }
        Command::Sandwich { params, a } => {
            let alg = SphericalAlgebra::symbolic(params.n, params.r)?;
            let json: ElementJson = serde_json::from_str(&inline_or_file(a)?)?;
            let s = alg.sandwich(&json.into_element()?)?;
            out.emit(&s.map_coeffs(params.specializer()?).to_json())?;
        }
        Command::Tgen { params, p, q, g } => {
            let alg = SphericalAlgebra::symbolic(params.n, params.r)?;
            let x = alg.t_gen(*p, *q, &parse_matrix(g, params.r)?)?;
            out.emit(&x.map_coeffs(params.specializer()?).to_json())?;
        }
        Command::Expand { params, element, m, m2 } => {
            let alg = SphericalAlgebra::symbolic(params.n, params.r)?;
            let ex = match (element, m, m2) {
                (Some(e), _, _) => {
                    let json: SphericalJson = serde_json::from_str(&inline_or_file(e)?)?;
                    alg.expand_in_t_basis(&json.into_element()?)?
                }
                (None, Some(m), Some(m2)) => alg.expand_product(&parse_index(m)?, &parse_index(m2)?)?,
                (None, Some(m), None) => alg.expand_in_t_basis(&alg.t_basis(&parse_index(m)?)?)?,
                (None, None, _) => return Err(CliError::Input("expand needs --element or --m".into())),
            };
            let f = params.specializer()?;
            let ex: TExpansion<ParamPoly> = ex.iter().map(|(k, c)| (k.clone(), f(c))).filter(|(_, c)| !c.is_zero()).collect();
            out.emit(&expansion_json(Some(params.n), params.r, &ex))?;
        }
        Command::StructureConstants { r, m1, m2, max_weight, max_size } => match (m1, m2, max_weight) {
            (Some(m1), Some(m2), _) => {
                let t = tables(cli, *r, &[(parse_index(m1)?, parse_index(m2)?)])?;
                out.emit(&t[0].to_json())?;
            }
            (_, _, Some(w)) => {
                let t = tables(cli, *r, &sweep_pairs(*r, *w, *max_size))?;
                eprintln!("{} tables", t.len());
                out.emit(&t.iter().map(StructureConstantTable::to_json).collect::<Vec<_>>())?;
            }
            _ => return Err(CliError::Input("give --m1 and --m2, or --max-weight".into())),
        },
        Command::Specialize { table, nu } => {
            let nu = parse_rational(nu)?;
            let json: TableJson = serde_json::from_str(&std::fs::read_to_string(table)?)?;
            let t = StructureConstantTable::from_json(json)?;
            out.emit(&expansion_json(None, t.r, &specialize(&t, &nu)))?;
        }
        Command::VerifyGuay { n, r, all_indices, indices, printed_delta, k_extraction } => {
            let alg = SphericalAlgebra::symbolic(*n, *r)?;
            let variant = if *printed_delta { DeltaTerm::Ebc } else { DeltaTerm::Ecb };
            let list = match (indices, all_indices) {
                (Some(v), _) if v.len() == 4 => vec![(v[0], v[1], v[2], v[3])],
                (Some(v), _) => return Err(CliError::Input(format!("--indices needs 4 values, got {}", v.len()))),
                (None, true) => admissible_indices(*r),
                (None, false) if *k_extraction => vec![],
                (None, false) => return Err(CliError::Input("give --all-indices, --indices or --k-extraction".into())),
            };
            use rayon::prelude::*;
            let per: Vec<Vec<VerificationReport>> =
                list.par_iter().map(|&idx| verify_main_relation(&alg, idx, variant)).collect::<Result<_, _>>()?;
            let mut reports: Vec<VerificationReport> = per.into_iter().flatten().collect();
            if *k_extraction {
                reports.extend(verify_k_extraction(&alg)?);
            }
            return emit_reports(&out, &reports);
        }
        Command::VerifyVl { l, r, degree } => {
            let mut reports = verify_relations(*l, *r, *degree)?;
            reports.extend(verify_commuting_square(*l, *r, *degree)?);
            return emit_reports(&out, &reports);
        }
        Command::ContentCheck { trials, seed } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(*seed);
            let mut reports = Vec::with_capacity(*trials);
            for _ in 0..*trials {
                let size = rng.gen_range(0..=8usize);
                let mut parts = Vec::new();
                let mut left = size;
                while left > 0 {
                    let p = rng.gen_range(1..=left);
                    parts.push(p);
                    left -= p;
                }
                parts.sort_unstable_by(|a, b| b.cmp(a));
                let lambda = YoungDiagram::new(parts.clone())?;
                let n = size + lambda.first_row() + rng.gen_range(0..=6usize);
                let lhs = interpolated_omega_value(&lambda, n)?;
                let rhs = content(&pad(&lambda, n)?);
                reports.push(VerificationReport::new("content_identity", format!("lambda={parts:?} n={n} value={lhs}"), lhs == rhs));
            }
            return emit_reports(&out, &reports);
        }
    }
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(CliError::Input(String::new()).exit_code());
        }
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
