use clap::{ArgGroup, Args, Parser, Subcommand};
use hvn_core::arith::is_prime;
use hvn_core::cmsearch::{run_search, RowStatus};
use hvn_core::congruence::{e_tilde, Elimination, nonbalanced_sieve, refine_nonbalanced, totient_solutions, REFINE_PRIMES};
use hvn_core::ellcurve::good_outside;
use hvn_core::ff::Fq;
use hvn_core::heavenly::{heavenly_verdict, two_torsion_degree};
use hvn_core::json::{parse_coeffs, parse_elem};
use hvn_core::pointcount::{count_points, CurveOverFq};
use hvn_core::scarcity::{horizontal_report, n_set, vertical_sieve};
use hvn_core::traces::{balanced_residues, matches_prediction, trace_records, trace_set_from, DEFAULT_P_BOUND};
use hvn_core::{Curve, QuadField};
use serde_json::{json, Value};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hvn", version, about = "Heavenly elliptic curves over quadratic fields")]
#[command(group(ArgGroup::new("format").args(["json", "csv", "text"])))]
struct Cli {
    /// Emit JSON
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV
    #[arg(long, global = true)]
    csv: bool,
    /// Emit plain text (default)
    #[arg(long, global = true)]
    text: bool,
    /// Seed for randomised point counting
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores)
    #[arg(long, global = true, env = "HVN_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariants and bad reduction of a curve over Q(sqrt d)
    CurveInfo(CurveArgs),
    /// Count points on a curve over F_p or F_{p^2}
    Count {
        #[arg(long)]
        p: u64,
        /// Extension degree, 1 or 2; F_{p^2} elements are [a, b] = a + b t
        #[arg(long, default_value_t = 1)]
        degree: u32,
        /// [a1, a2, a3, a4, a6] as JSON
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
    },
    /// Frobenius traces mod l and the balanced prediction
    Traces {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = DEFAULT_P_BOUND)]
        p_bound: u64,
    },
    /// Heavenly verdict at l
    Heavenly {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = DEFAULT_P_BOUND)]
        p_bound: u64,
    },
    /// Congruence sieves
    #[command(subcommand)]
    Sieve(SieveCmd),
    /// Scarcity sieves
    #[command(subcommand)]
    Scarcity(ScarcityCmd),
    /// Search CM curves heavenly at some prime
    CmSearch {
        #[arg(long, default_value_t = DEFAULT_P_BOUND)]
        p_bound: u64,
        /// Also write the row table as CSV to this file
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Solutions of sum n_d phi(d) = 2g and the largest lcm
    Totient {
        #[arg(long)]
        g: u32,
        /// Require n_1 and n_2 even
        #[arg(long)]
        constrained: bool,
    },
}

#[derive(Args)]
struct CurveArgs {
    /// Squarefree d with K = Q(sqrt d)
    #[arg(long, allow_hyphen_values = true)]
    d: i64,
    /// [a1, a2, a3, a4, a6]; each an integer or [x, y] = x + y omega
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
}

#[derive(Subcommand)]
enum SieveCmd {
    /// Non-balanced Tate-Oort pairs surviving the trace congruences
    Nonbalanced {
        #[arg(long, default_value_t = 11)]
        p_max: u64,
        #[arg(long, default_value_t = 13)]
        l_min: u64,
        #[arg(long, default_value_t = 1000)]
        l_max: u64,
        /// Apply the residue-class and Hasse eliminations
        #[arg(long)]
        refine: bool,
    },
}

#[derive(Subcommand)]
enum ScarcityCmd {
    /// The set N(l)
    Nset {
        #[arg(long)]
        ell: u64,
    },
    /// Fields in which every prime of N(l) is inert
    Vertical {
        #[arg(long)]
        ell: u64,
        #[arg(long, default_value_t = 2500)]
        disc_bound: u64,
        /// Include imaginary fields
        #[arg(long)]
        all_signs: bool,
    },
    /// Primes l not excluded by split primes of Q(sqrt d)
    Horizontal {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long, default_value_t = 164)]
        l_min: u64,
        #[arg(long, default_value_t = 10_000_000)]
        l_max: u64,
        #[arg(long, default_value_t = 250)]
        p_cap: u64,
    },
}

type Res = Result<String, String>;

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn join<T: ToString>(xs: &[T], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn no_csv(fmt: Format) -> Result<(), String> {
    if fmt == Format::Csv {
        return Err("CSV output is not available for this command".into());
    }
    Ok(())
}

fn curve_of(a: &CurveArgs) -> Result<Curve, String> {
    let k = QuadField::new(a.d).map_err(|e| e.to_string())?;
    let coeffs = parse_coeffs(&k, &a.coeffs).map_err(|e| e.to_string())?;
    Curve::new(coeffs).map_err(|e| e.to_string())
}

fn field_json(k: &QuadField) -> Value {
    json!({ "d": k.d(), "disc": k.disc(), "poly": k.min_poly_label() })
}

fn curve_info(a: &CurveArgs, fmt: Format) -> Res {
    no_csv(fmt)?;
    let e = curve_of(a)?;
    let k = e.field();
    let (good, bad) = good_outside(&e, &[]);
    let degree = two_torsion_degree(&e);
    if fmt == Format::Json {
        return Ok(pretty(&json!({
            "field": field_json(&k),
            "curve": e,
            "c4": e.c4(),
            "c6": e.c6(),
            "disc": e.disc(),
            "disc_norm": serde_json::Number::from_string_unchecked(e.disc().norm().to_string()),
            "j": e.j(),
            "good_everywhere": good,
            "bad_primes": bad,
            "two_torsion_degree": degree,
        })));
    }
    let mut s = format!("field: Q(sqrt {}), disc {}, {}\n", k.d(), k.disc(), k.min_poly_label());
    s += &format!("c4: {}\nc6: {}\ndisc: {}\nj: {}\n", e.c4(), e.c6(), e.disc(), e.j());
    if good {
        s += "good reduction everywhere\n";
    }
    for r in &bad {
        s += &format!("bad at {}: {:?}, v(disc) = {}\n", r.prime.label(), r.kind, r.min_disc_val);
    }
    s += &format!("[K(E[2]) : K] = {degree}\n");
    Ok(s)
}

fn count(p: u64, degree: u32, coeffs: &str, seed: u64, fmt: Format) -> Res {
    no_csv(fmt)?;
    if !is_prime(p) || !(1..=2).contains(&degree) || p >= 1 << 31 {
        return Err(format!("need a prime p < 2^31 and degree 1 or 2, got p = {p}, degree = {degree}"));
    }
    let fq = Fq::new(p, degree);
    let v: Value = serde_json::from_str(coeffs).map_err(|e| e.to_string())?;
    let xs = v.as_array().filter(|xs| xs.len() == 5).ok_or("expected 5 coefficients")?;
    // reuse the field-element parser for [a, b] pairs
    let k = QuadField::new(-1).unwrap();
    let mut a = Vec::new();
    for x in xs {
        let c = parse_elem(&k, x).map_err(|e| e.to_string())?;
        let r = |n: &num_bigint::BigInt| hvn_core::arith::mod_big(n, p);
        if degree == 1 && r(&c.y) != 0 {
            return Err("pairs need --degree 2".into());
        }
        a.push(fq.elem(r(&c.x), r(&c.y)));
    }
    let e = CurveOverFq::new(fq, a.try_into().unwrap()).map_err(|e| e.to_string())?;
    let n = count_points(&e, seed);
    let t = e.q() as i64 + 1 - n as i64;
    Ok(match fmt {
        Format::Json => pretty(&json!({ "p": p, "degree": degree, "q": e.q(), "points": n, "trace": t })),
        _ => format!("q = {}\n#E = {n}\na = {t}\n", e.q()),
    })
}

fn traces(a: &CurveArgs, ell: u64, p_bound: u64, seed: u64, fmt: Format) -> Res {
    if !is_prime(ell) {
        return Err(format!("{ell} is not prime"));
    }
    let e = curve_of(a)?;
    let recs: Vec<_> = trace_records(&e, p_bound, &[ell], seed).into_iter().map(|r| r.with_ell(ell)).collect();
    let ts = trace_set_from(&recs, ell, p_bound);
    let predicted_match = (ell % 4 == 3).then(|| recs.iter().all(|r| matches_prediction(r, ell) != Some(false)));
    let residues: Vec<u64> = ts.residues.iter().copied().collect();
    let balanced = ell > 2 && ts.residues.is_subset(&balanced_residues(ell));
    Ok(match fmt {
        Format::Json => pretty(&json!({
            "ell": ell,
            "p_bound": p_bound,
            "primes_used": ts.primes_used,
            "residues": residues,
            "size": ts.size(),
            "balanced": balanced,
            "predicted_match": predicted_match,
        })),
        Format::Csv => {
            let mut s = String::from("prime,q,a,a_mod_ell\n");
            for r in &recs {
                s += &format!("{},{},{},{}\n", r.prime.label(), r.q, r.a, r.a_mod_ell.unwrap());
            }
            s
        }
        Format::Text => format!(
            "trace set mod {ell} ({} primes below {p_bound}): {{{}}}\nsize: {}\nbalanced: {balanced}\npredicted match: {}\n",
            ts.primes_used,
            join(&residues, ","),
            ts.size(),
            predicted_match.map_or("n/a".to_string(), |b| b.to_string()),
        ),
    })
}

fn heavenly(a: &CurveArgs, ell: u64, p_bound: u64, seed: u64, fmt: Format) -> Res {
    no_csv(fmt)?;
    if !is_prime(ell) {
        return Err(format!("{ell} is not prime"));
    }
    let e = curve_of(a)?;
    let v = heavenly_verdict(&e, ell, p_bound, seed);
    Ok(match fmt {
        Format::Json => pretty(&v),
        _ => format!("l = {ell}: {}\n", serde_json::to_string(&v.status).unwrap()),
    })
}

fn sieve(cmd: &SieveCmd, fmt: Format) -> Res {
    let SieveCmd::Nonbalanced { p_max, l_min, l_max, refine } = *cmd;
    let rows = nonbalanced_sieve(p_max, l_min, l_max);
    if refine {
        let cases = refine_nonbalanced(&rows, &REFINE_PRIMES);
        return Ok(match fmt {
            Format::Json => pretty(&cases),
            Format::Csv => {
                let mut s = String::from("j1,j2,e,ell,survives,i1\n");
                for c in &cases {
                    s += &format!("{},{},{},{},{},{}\n", c.j1, c.j2, c.e, c.ell, c.eliminated.is_none(), join(&c.i1, ";"));
                }
                s
            }
            Format::Text => cases
                .iter()
                .map(|c| match &c.eliminated {
                    None => format!("({},{}) l = {}: survives, i1 in {{{}}}\n", c.j1, c.j2, c.ell, join(&c.i1, ",")),
                    Some(Elimination::Hasse { p }) => {
                        format!("({},{}) l = {}: eliminated by the Hasse bound at p = {p}\n", c.j1, c.j2, c.ell)
                    }
                    Some(Elimination::ResidueClass { h }) => {
                        format!("({},{}) l = {}: eliminated, l = 1 mod {h}\n", c.j1, c.j2, c.ell)
                    }
                })
                .collect(),
        });
    }
    Ok(match fmt {
        Format::Json => pretty(&rows),
        Format::Csv => {
            let mut s = String::from("j1,j2,ells\n");
            for r in &rows {
                s += &format!("{},{},{}\n", r.j1, r.j2, join(&r.ells, ";"));
            }
            s
        }
        Format::Text => rows.iter().map(|r| format!("({},{}): {{{}}}\n", r.j1, r.j2, join(&r.ells, ","))).collect(),
    })
}

fn scarcity(cmd: &ScarcityCmd, fmt: Format) -> Res {
    match *cmd {
        ScarcityCmd::Nset { ell } => {
            let ns = n_set(ell).map_err(|e| e.to_string())?;
            Ok(match fmt {
                Format::Json => pretty(&json!({ "ell": ell, "n_set": ns, "size": ns.len() })),
                Format::Csv => format!("p\n{}", ns.iter().map(|p| format!("{p}\n")).collect::<String>()),
                Format::Text => format!("N({ell}) = {{{}}}\n#N({ell}) = {}\n", join(&ns, ","), ns.len()),
            })
        }
        ScarcityCmd::Vertical { ell, disc_bound, all_signs } => {
            let s = vertical_sieve(ell, disc_bound, !all_signs).map_err(|e| e.to_string())?;
            Ok(match fmt {
                Format::Json => {
                    pretty(&json!({ "ell": ell, "disc_bound": disc_bound, "real_only": !all_signs, "survivors": s }))
                }
                Format::Csv => format!("disc\n{}", s.iter().map(|d| format!("{d}\n")).collect::<String>()),
                Format::Text => format!("fields with |disc| <= {disc_bound} surviving l = {ell}: {{{}}}\n", join(&s, ",")),
            })
        }
        ScarcityCmd::Horizontal { d, l_min, l_max, p_cap } => {
            let k = QuadField::new(d).map_err(|e| e.to_string())?;
            let r = horizontal_report(&k, l_min, l_max, p_cap);
            Ok(match fmt {
                Format::Json => pretty(&r),
                Format::Csv => format!("ell\n{}", r.survivors.iter().map(|l| format!("{l}\n")).collect::<String>()),
                Format::Text => format!(
                    "Q(sqrt {d}), {} split primes below {p_cap}\nsurvivors in [{l_min}, {l_max}]: {{{}}}\n",
                    r.split_primes.len(),
                    join(&r.survivors, ",")
                ),
            })
        }
    }
}

fn cm_search(p_bound: u64, out: Option<&std::path::Path>, seed: u64, fmt: Format) -> Res {
    let r = run_search(p_bound, seed);
    if let Some(path) = out {
        std::fs::write(path, r.to_csv()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(match fmt {
        Format::Json => pretty(&r),
        Format::Csv => r.to_csv(),
        Format::Text => {
            let mut s = r.to_csv();
            let t = r.totals;
            s += &format!("\ntotals: r_K = {}, classes = {}, r_Q = {}\n", t.r_k, t.classes, t.r_q);
            let flagged: Vec<&str> =
                r.checks.iter().filter(|c| c.status == RowStatus::Flagged).map(|c| c.label.as_str()).collect();
            s += &format!("reference rows matched: {}/{}\n", r.checks.len() - flagged.len(), r.checks.len());
            for c in r.checks.iter().filter(|c| c.status == RowStatus::Flagged) {
                s += &format!("flagged {}: expected {:?}, found {:?}\n", c.label, c.expected, c.found);
            }
            for l in &r.unlisted {
                s += &format!("unlisted row {l}\n");
            }
            s
        }
    })
}

fn totient(g: u32, constrained: bool, fmt: Format) -> Res {
    let sols = totient_solutions(g, constrained).map_err(|e| e.to_string())?;
    let et = e_tilde(g).map_err(|e| e.to_string())?;
    let term = |m: &std::collections::BTreeMap<u64, u32>| {
        m.iter().map(|(d, n)| format!("{d}^{n}")).collect::<Vec<_>>().join(" ")
    };
    Ok(match fmt {
        Format::Json => pretty(&json!({ "g": g, "constrained": constrained, "e_tilde": et, "solutions": sols })),
        Format::Csv => {
            let mut s = String::from("solution,lcm\n");
            for x in &sols {
                s += &format!("{},{}\n", term(&x.multiplicities), x.lcm);
            }
            s
        }
        Format::Text => {
            let mut s = format!("g = {g}: {} solutions, largest lcm {et}\n", sols.len());
            for x in &sols {
                s += &format!("{}  lcm {}\n", term(&x.multiplicities), x.lcm);
            }
            s
        }
    })
}

fn run(cli: &Cli) -> Res {
    let fmt = if cli.json {
        Format::Json
    } else if cli.csv {
        Format::Csv
    } else {
        Format::Text
    };
    let seed = cli.seed;
    match &cli.cmd {
        Cmd::CurveInfo(a) => curve_info(a, fmt),
        Cmd::Count { p, degree, coeffs } => count(*p, *degree, coeffs, seed, fmt),
        Cmd::Traces { curve, ell, p_bound } => traces(curve, *ell, *p_bound, seed, fmt),
        Cmd::Heavenly { curve, ell, p_bound } => heavenly(curve, *ell, *p_bound, seed, fmt),
        Cmd::Sieve(c) => sieve(c, fmt),
        Cmd::Scarcity(c) => scarcity(c, fmt),
        Cmd::CmSearch { p_bound, out } => cm_search(*p_bound, out.as_deref(), seed, fmt),
        Cmd::Totient { g, constrained } => totient(*g, *constrained, fmt),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("hvn: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(s) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("hvn: {e}");
            ExitCode::from(1)
        }
    }
}
