//! The `tlmix` command line. `run` takes argv and the two output streams and
//! returns the exit code: 0 on success, 1 on a domain error, 2 on a usage error.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tlmix_core::cellmod::{self, GramMatrix};
use tlmix_core::digits;
use tlmix_core::ring::{Fq, IntPolyRing, LocalRing, QuotientRing};
use tlmix_core::{jantzen, jw, oracle, qnum, structure, Error, MixedChar};

const SCHEMA: &str = "tlmix/1";
const SCALE_CAP: usize = 12;

#[derive(Parser, Debug)]
#[command(name = "tlmix", about = "Temperley-Lieb representation theory in mixed characteristic")]
struct Cli {
    /// Write results to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<std::path::PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct CharArgs {
    #[arg(long)]
    ell: u64,
    #[arg(long)]
    p: u64,
    /// Sign in m_δ = ψ_ℓ(±δ) for odd ℓ.
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    sign: i8,
}

#[derive(Args, Debug, Clone)]
struct OptCharArgs {
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    sign: i8,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FamilyArg {
    Classical,
    Mixed,
    Special,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum RingArg {
    Q,
    Local,
    Field,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum DirArg {
    Up,
    Down,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// The quantum number [n] as a polynomial in d.
    Qnum {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        /// Print the ψ_k factorization.
        #[arg(long)]
        factor: bool,
        /// Reduce modulo (p^i, m_δ^j), given as I,J; needs --ell and --p.
        #[arg(long, value_name = "I,J")]
        reduce: Option<String>,
        #[command(flatten)]
        chi: OptCharArgs,
        #[arg(long)]
        json: bool,
    },
    /// The (ℓ,p)-adic digits of n+1, big-endian.
    Digits {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long)]
        json: bool,
    },
    /// supp(n), or the support grid up to --grid as PBM or CSV.
    Support {
        #[arg(long, required_unless_present = "grid")]
        n: Option<u64>,
        #[arg(long, value_name = "YMAX")]
        grid: Option<u64>,
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long)]
        json: bool,
        #[arg(long, conflicts_with = "csv")]
        pbm: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Admissible sets with their reflections.
    Admissible {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "down")]
        dir: DirArg,
        /// Largest n(S) listed for up sets.
        #[arg(long, default_value_t = 1000)]
        bound: u64,
        #[command(flatten)]
        chi: CharArgs,
        #[arg(long)]
        json: bool,
    },
    /// Coefficients of a Jones-Wenzl idempotent.
    Jw {
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value = "classical")]
        family: FamilyArg,
        #[command(flatten)]
        chi: OptCharArgs,
        /// Run the idempotency/absorption checks instead of printing.
        #[arg(long)]
        check: bool,
    },
    /// The Gram matrix of W_n(m) as TSV.
    Gram {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value = "q")]
        ring: RingArg,
        #[command(flatten)]
        chi: OptCharArgs,
    },
    /// Composition factors of W_n(m) as JSON.
    Factors {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        chi: CharArgs,
    },
    /// The submodule lattice of W_n(m).
    Alperin {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        chi: CharArgs,
        /// Keep only the factors ≤ K.
        #[arg(long, value_name = "K")]
        truncate: Option<u64>,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// ξ_i(γ_S) staircases of the composition factors of W_n(m).
    Jantzen {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[command(flatten)]
        chi: CharArgs,
        /// A single up-admissible set, e.g. {0,3}.
        #[arg(long, value_name = "SET")]
        factor: Option<String>,
        #[arg(long, conflicts_with = "json")]
        csv: bool,
        #[arg(long)]
        json: bool,
    },
    /// Oracle audits, TAP output.
    Selftest {
        #[arg(long, default_value_t = 8)]
        max_n: usize,
        /// Characteristics as ell:p, comma separated.
        #[arg(long, default_value = "3:2,2:3,5:3")]
        chars: String,
        /// Allow --max-n above the default cap.
        #[arg(long)]
        large: bool,
    },
}

enum Fail {
    Pipe,
    Usage(String),
    Domain(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Domain(e.to_string())
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return Fail::Pipe;
        }
        Fail::Domain(e.to_string())
    }
}

type Out = Result<(), Fail>;

fn make_chi(ell: u64, p: u64, sign: i8) -> Result<MixedChar, Fail> {
    if !qnum::is_valid_mixed_char(ell, p) {
        return Err(Fail::Usage(format!("({ell},{p}) is not a valid mixed characteristic")));
    }
    MixedChar::with_sign(ell, p, sign).map_err(|e| Fail::Usage(e.to_string()))
}

impl CharArgs {
    fn chi(&self) -> Result<MixedChar, Fail> {
        make_chi(self.ell, self.p, self.sign)
    }
}

impl OptCharArgs {
    fn chi(&self) -> Result<Option<MixedChar>, Fail> {
        match (self.ell, self.p) {
            (Some(l), Some(p)) => make_chi(l, p, self.sign).map(Some),
            (None, None) => Ok(None),
            _ => Err(Fail::Usage("--ell and --p go together".into())),
        }
    }

    fn require(&self, what: &str) -> Result<MixedChar, Fail> {
        self.chi()?.ok_or_else(|| Fail::Usage(format!("{what} needs --ell and --p")))
    }
}

fn parse_set(s: &str) -> Result<Vec<u32>, Fail> {
    let inner = s.trim().trim_start_matches('{').trim_end_matches('}');
    let mut v = Vec::new();
    for part in inner.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        v.push(part.parse::<u32>().map_err(|_| Fail::Usage(format!("bad set {s:?}")))?);
    }
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

fn print_json(out: &mut dyn Write, v: &Value) -> Out {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"))?;
    Ok(())
}

fn cmd_qnum(out: &mut dyn Write, n: i64, factor: bool, reduce: Option<String>, chi: &OptCharArgs, as_json: bool) -> Out {
    let q = qnum::quantum(n);
    let factors: Vec<u64> = if n == 0 { vec![] } else { qnum::psi_factors(n.unsigned_abs()) };
    let reduced = match &reduce {
        None => None,
        Some(ij) => {
            let c = chi.require("--reduce")?;
            let parts: Vec<u32> = ij.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>().map_err(|_| Fail::Usage(format!("bad --reduce {ij:?}")))?;
            let [i, j] = parts[..] else { return Err(Fail::Usage("--reduce takes I,J".into())) };
            let ring = QuotientRing::new(&c, i, j)?;
            Some(tlmix_core::IntPoly::from_u64s(&ring.from_poly(&q)))
        }
    };
    if as_json {
        let mut v = json!({ "schema": SCHEMA, "kind": "qnum", "n": n, "poly": q.to_string() });
        if factor {
            v["psi"] = json!(factors);
        }
        if let Some(r) = &reduced {
            v["reduced"] = json!(r.to_string());
        }
        return print_json(out, &v);
    }
    writeln!(out, "{q}")?;
    if factor {
        let parts: Vec<String> = factors.iter().map(|k| format!("psi_{k}")).collect();
        let sign = if n < 0 { "-" } else { "" };
        writeln!(out, "{sign}{}", if parts.is_empty() { if n == 0 { "0".to_string() } else { "1".to_string() } } else { parts.join(" * ") })?;
    }
    if let Some(r) = reduced {
        writeln!(out, "{r}")?;
    }
    Ok(())
}

fn cmd_digits(out: &mut dyn Write, n: u64, chi: &MixedChar, as_json: bool) -> Out {
    let e = digits::expand(n, chi);
    if as_json {
        return print_json(out, &json!({ "schema": SCHEMA, "kind": "digits", "n": n, "digits": e.big_endian() }));
    }
    writeln!(out, "{e}")?;
    Ok(())
}

fn cmd_support(out: &mut dyn Write, n: Option<u64>, grid: Option<u64>, chi: &MixedChar, as_json: bool, pbm: bool, csv: bool) -> Out {
    if let Some(y) = grid {
        if pbm {
            write!(out, "{}", digits::support_grid_pbm(chi, y))?;
        } else if csv {
            write!(out, "{}", digits::support_grid_csv(chi, y))?;
        } else {
            for row in digits::support_grid(chi, y).iter().rev() {
                let line: String = row.iter().map(|&b| if b { '#' } else { '.' }).collect();
                writeln!(out, "{line}")?;
            }
        }
        return Ok(());
    }
    let n = n.expect("clap requires n");
    let s = digits::support(n, chi);
    if as_json {
        return print_json(out, &json!({ "schema": SCHEMA, "kind": "support", "n": n, "support": s }));
    }
    let parts: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    writeln!(out, "{}", parts.join(" "))?;
    Ok(())
}

fn cmd_admissible(out: &mut dyn Write, n: u64, dir: DirArg, bound: u64, chi: &MixedChar, as_json: bool) -> Out {
    let sets = match dir {
        DirArg::Down => digits::down_admissible_sets(n, chi),
        DirArg::Up => digits::up_admissible_sets(n, bound, chi),
    };
    let rows: Vec<(String, u64)> = sets.iter().map(|s| (s.to_string(), s.target(chi))).collect();
    if as_json {
        let d = match dir {
            DirArg::Down => "down",
            DirArg::Up => "up",
        };
        let list: Vec<Value> = rows.iter().map(|(s, t)| json!({ "set": s, "target": t })).collect();
        return print_json(out, &json!({ "schema": SCHEMA, "kind": "admissible", "n": n, "direction": d, "sets": list }));
    }
    let w = rows.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
    for (s, t) in rows {
        let pad = w - s.chars().count();
        writeln!(out, "{s}{}  {t}", " ".repeat(pad))?;
    }
    Ok(())
}

fn cmd_jw(out: &mut dyn Write, n: u64, family: FamilyArg, chi: &OptCharArgs, check: bool) -> Out {
    if check {
        let mut bad = Vec::new();
        match family {
            FamilyArg::Classical => {
                bad.extend(jw::checks::classical_exact(n as usize)?);
                bad.extend(jw::checks::absorption_exact(n as usize)?);
            }
            FamilyArg::Mixed | FamilyArg::Special => {
                let c = chi.require("the mixed family")?;
                let probe = jw::checks::CellProbe::new(n as usize, 1);
                bad.extend(jw::checks::mixed_idempotent(n, &c, &probe)?);
                bad.extend(jw::checks::mother_sum(n, &c, &probe)?);
                let r = jw::dense::mixed_jw_locality(n, &c)?;
                if !r.is_local() {
                    bad.push(format!("JW_{n} has a coefficient outside the local ring"));
                }
            }
        }
        for b in &bad {
            writeln!(out, "FAIL {b}")?;
        }
        if bad.is_empty() {
            writeln!(out, "ok")?;
            return Ok(());
        }
        return Err(Fail::Domain(format!("{} checks failed", bad.len())));
    }
    match family {
        FamilyArg::Classical => {
            for (d, c) in jw::jw(n as usize).sorted_terms() {
                writeln!(out, "{d}\t{c}")?;
            }
        }
        FamilyArg::Mixed => {
            let c = chi.require("the mixed family")?;
            for (d, x) in jw::mixed_jw(n, &c)?.sorted_terms() {
                writeln!(out, "{d}\t{x}")?;
            }
        }
        FamilyArg::Special => {
            let c = chi.require("the special family")?;
            let f = c.field()?;
            for (d, x) in jw::specialized_jw(n, &c)?.sorted_terms() {
                writeln!(out, "{d}\t{}", f.elem(*x))?;
            }
        }
    }
    Ok(())
}

fn write_tsv<E>(out: &mut dyn Write, g: &GramMatrix<E>, show: impl Fn(&E) -> String) -> Out {
    let head: Vec<String> = g.basis.elements.iter().map(|e| e.tableau.to_string()).collect();
    writeln!(out, "\t{}", head.join("\t"))?;
    for (h, row) in head.iter().zip(&g.entries) {
        let cells: Vec<String> = row.iter().map(&show).collect();
        writeln!(out, "{h}\t{}", cells.join("\t"))?;
    }
    Ok(())
}

fn cmd_gram(out: &mut dyn Write, n: usize, m: usize, ring: RingArg, chi: &OptCharArgs) -> Out {
    match ring {
        RingArg::Q => write_tsv(out, &cellmod::gram(n, m, &IntPolyRing)?, |x| x.to_string()),
        RingArg::Local => {
            let c = chi.require("--ring local")?;
            write_tsv(out, &cellmod::gram(n, m, &LocalRing { chi: c })?, |x| x.to_string())
        }
        RingArg::Field => {
            let f: Fq = chi.require("--ring field")?.field()?;
            write_tsv(out, &cellmod::gram(n, m, &f)?, |&x| f.elem(x).to_string())
        }
    }
}

fn cmd_factors(out: &mut dyn Write, n: u64, m: u64, chi: &MixedChar) -> Out {
    let list: Vec<Value> = cellmod::composition_factors(n, m, chi)?
        .into_iter()
        .map(|(t, s)| json!({ "factor": t, "set": s.indices }))
        .collect();
    print_json(out, &json!({ "schema": SCHEMA, "kind": "factors", "n": n, "m": m, "factors": list }))
}

fn cmd_alperin(out: &mut dyn Write, n: u64, m: u64, chi: &MixedChar, truncate: Option<u64>, dot: bool, as_json: bool) -> Out {
    let mut lat = structure::submodule_lattice(n, m, chi)?;
    if let Some(k) = truncate {
        lat = structure::truncate(&lat, k, chi)?;
    }
    if dot {
        write!(out, "{}", structure::alperin_dot(&lat))?;
        return Ok(());
    }
    if as_json {
        let nodes: Vec<Value> = lat.nodes.iter().map(|x| json!({ "factor": x.factor, "set": x.set })).collect();
        let edges: Vec<Value> = lat.covers.iter().map(|&(a, b)| json!([a, b])).collect();
        return print_json(out, &json!({ "schema": SCHEMA, "kind": "alperin", "n": lat.n, "m": m, "nodes": nodes, "edges": edges }));
    }
    for (i, x) in lat.nodes.iter().enumerate() {
        writeln!(out, "{i}\t{}\t{}", x.factor, digits::fmt_set(&x.set))?;
    }
    for (a, b) in lat.factor_edges() {
        writeln!(out, "{a} -- {b}")?;
    }
    Ok(())
}

fn cmd_jantzen(out: &mut dyn Write, n: u64, m: u64, chi: &MixedChar, factor: Option<String>, csv: bool, as_json: bool) -> Out {
    let mut t = jantzen::xi_table(n, m, chi)?;
    if let Some(s) = factor {
        let set = parse_set(&s)?;
        let want = digits::fmt_set(&set);
        t.rows.retain(|r| r.set == want);
        if t.rows.is_empty() {
            return Err(Fail::Domain(format!("{want} is not a composition factor of W_{n}({m})")));
        }
    }
    if csv {
        write!(out, "{}", t.to_csv())?;
        return Ok(());
    }
    if as_json {
        let mut v = serde_json::to_value(&t).expect("serializable");
        v["schema"] = json!(SCHEMA);
        v["kind"] = json!("jantzen");
        return print_json(out, &v);
    }
    for r in &t.rows {
        let h: Vec<String> = r.heights.iter().map(|x| x.to_string()).collect();
        writeln!(out, "{}\t{}\t{} ({}...)", r.factor, r.set, h.join(" "), r.stable)?;
    }
    Ok(())
}

fn parse_chars(s: &str) -> Result<Vec<MixedChar>, Fail> {
    s.split(',')
        .map(|part| {
            let (l, p) = part.trim().split_once(':').ok_or_else(|| Fail::Usage(format!("bad characteristic {part:?}")))?;
            let l = l.parse().map_err(|_| Fail::Usage(format!("bad ell in {part:?}")))?;
            let p = p.parse().map_err(|_| Fail::Usage(format!("bad p in {part:?}")))?;
            make_chi(l, p, 1)
        })
        .collect()
}

type Audit = (String, Result<Vec<String>, Error>);

fn char_audits(c: &MixedChar, max_n: usize) -> Vec<Audit> {
    let mut results: Vec<Audit> = Vec::new();
    let small = max_n.min(8);
    let zero_ok = !c.in_max_ideal(&tlmix_core::IntPoly::delta());
    for n in 0..=max_n {
        for m in (n % 2..=n).step_by(2) {
            if m == 0 && !zero_ok {
                continue;
            }
            results.push((format!("{c} W_{n}({m}) lattice against cyclic submodules"), oracle::lattice_audit(n, m, c)));
            let dims = cellmod::factor_dimension_check(n, m, c)
                .map(|(ok, t)| if ok { vec![] } else { vec![format!("factor dimensions sum to {t}")] });
            results.push((format!("{c} W_{n}({m}) factor dimensions"), dims));
        }
    }
    let xi = (|| -> Result<Vec<String>, Error> {
        let mut o = jantzen::XiOracle::new(c, 6)?;
        let mut bad = Vec::new();
        for m in 0..=40u64 {
            for s in digits::up_admissible_sets(m, 400, c) {
                let got = o.profile(&s.indices)?;
                for i in 1..=6u32 {
                    if got[i as usize - 1] != jantzen::xi_closed_form(i, &s.indices, c)? {
                        bad.push(format!("m={m} S={s} i={i}"));
                    }
                }
            }
        }
        Ok(bad)
    })();
    results.push((format!("{c} xi closed form against the polynomial oracle"), xi));
    let gam = (|| -> Result<Vec<String>, Error> {
        let mut bad = Vec::new();
        for m in 0..=small as u64 {
            for s in digits::up_admissible_sets(m, small as u64, c) {
                if jantzen::gamma_diagrammatic(m, &s.indices, c)? != jantzen::gamma_ratio(m, &s.indices, c)?.to_ratfunc() {
                    bad.push(format!("m={m} S={s}"));
                }
            }
        }
        Ok(bad)
    })();
    results.push((format!("{c} gamma from diagrams"), gam));
    results
}

fn cmd_selftest(out: &mut dyn Write, max_n: usize, chars: &str, large: bool) -> Out {
    if max_n > SCALE_CAP && !large {
        return Err(Fail::Usage(format!("--max-n above {SCALE_CAP} needs --large")));
    }
    let chars = parse_chars(chars)?;
    let mut results: Vec<Audit> = Vec::new();
    results.push((
        "quantum numbers factor into psi_k".into(),
        Ok((1..=50u64)
            .filter(|&n| {
                let prod = qnum::psi_factors(n).iter().fold(tlmix_core::IntPoly::one(), |a, &k| a.mul(&qnum::psi(k)));
                prod != qnum::quantum(n as i64)
            })
            .map(|n| format!("[{n}]"))
            .collect()),
    ));
    for n in 1..=max_n.min(8) {
        results.push((format!("jw_{n} exact identities"), jw::checks::classical_exact(n)));
    }
    let per_char: Vec<Vec<Audit>> = std::thread::scope(|sc| {
        let hs: Vec<_> = chars.iter().map(|c| sc.spawn(move || char_audits(c, max_n))).collect();
        hs.into_iter().map(|h| h.join().expect("audit thread")).collect()
    });
    results.extend(per_char.into_iter().flatten());
    writeln!(out, "1..{}", results.len())?;
    let mut failed = 0;
    for (k, (name, r)) in results.iter().enumerate() {
        match r {
            Ok(bad) if bad.is_empty() => writeln!(out, "ok {} - {name}", k + 1)?,
            Ok(bad) => {
                failed += 1;
                writeln!(out, "not ok {} - {name}", k + 1)?;
                for b in bad {
                    writeln!(out, "# {b}")?;
                }
            }
            Err(e) => {
                failed += 1;
                writeln!(out, "not ok {} - {name}", k + 1)?;
                writeln!(out, "# {e}")?;
            }
        }
    }
    if failed > 0 {
        return Err(Fail::Domain(format!("{failed} selftests failed")));
    }
    Ok(())
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Out {
    match cli.cmd {
        Cmd::Qnum { n, factor, reduce, chi, json } => cmd_qnum(out, n, factor, reduce, &chi, json),
        Cmd::Digits { n, chi, json } => cmd_digits(out, n, &chi.chi()?, json),
        Cmd::Support { n, grid, chi, json, pbm, csv } => cmd_support(out, n, grid, &chi.chi()?, json, pbm, csv),
        Cmd::Admissible { n, dir, bound, chi, json } => cmd_admissible(out, n, dir, bound, &chi.chi()?, json),
        Cmd::Jw { n, family, chi, check } => cmd_jw(out, n, family, &chi, check),
        Cmd::Gram { n, m, ring, chi } => cmd_gram(out, n, m, ring, &chi),
        Cmd::Factors { n, m, chi } => cmd_factors(out, n, m, &chi.chi()?),
        Cmd::Alperin { n, m, chi, truncate, dot, json } => cmd_alperin(out, n, m, &chi.chi()?, truncate, dot, json),
        Cmd::Jantzen { n, m, chi, factor, csv, json } => cmd_jantzen(out, n, m, &chi.chi()?, factor, csv, json),
        Cmd::Selftest { max_n, chars, large } => cmd_selftest(out, max_n, &chars, large),
    }
}

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("usage error");
            let _ = writeln!(err, "{first}");
            return 2;
        }
    };
    let res = match cli.output.clone() {
        None => dispatch(cli, out),
        Some(path) => {
            let mut buf = Vec::new();
            let r = dispatch(cli, &mut buf);
            match std::fs::write(&path, &buf) {
                Ok(()) => r,
                Err(e) => r.and(Err(Fail::Domain(format!("{}: {e}", path.display())))),
            }
        }
    };
    match res {
        Ok(()) | Err(Fail::Pipe) => 0,
        Err(Fail::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Fail::Domain(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}
