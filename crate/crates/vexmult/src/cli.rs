//! Command-line front end.
//!
//! Exit codes: 0 success, 2 failed precondition, 3 resource cap, 64 usage.
//! Results go to `out`; diagnostics go to `err` as one JSON object per line.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::diagrams::{essential_set, render_rothe, rothe_diagram, BoxesJson};
use crate::error::{Error, Result};
use crate::excited::{default_state_cap, enumerate_with, render_state, EnumerateOptions, Region};
use crate::klmatrix::{
    accounting_identity, echelon_survivor_check_for, is_coset_minimal, label_count_check_for,
    rank_claim_check_for, direct_sum_matrix_for,
};
use crate::multiplicity::{multiplicity_with, MultiplicityOptions, MultiplicityReport};
use crate::vexillary::{
    is_vexillary, outer_shape, perm_of_triple, shape_of, triple_of, weak_triple, Shape, Triple,
};
use crate::weylgroups::{bruhat_leq, elements, group_order, CoverClosure, LieType, Notation, SignedPermutation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 64;

/// Largest group order the corpus command will sweep.
pub const CORPUS_MAX_ORDER: usize = 5040;

#[derive(Parser, Debug)]
#[command(name = "vexmult", version, about = "Multiplicities of vexillary Schubert varieties via excited Young diagrams")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Ascii)]
    format: Format,
    /// Print barred entries as `2b` instead of `-2`.
    #[arg(long, global = true)]
    bar_notation: bool,
    /// Master seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of excited states to enumerate (overrides VEXMULT_STATE_CAP).
    #[arg(long, global = true)]
    state_cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    Json,
}

#[derive(Args, Debug)]
struct TypeW {
    #[arg(long = "type", value_parser = parse_type)]
    t: LieType,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_perm)]
    w: SignedPermutation,
}

#[derive(Args, Debug)]
struct TypeWV {
    #[arg(long = "type", value_parser = parse_type)]
    t: LieType,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_perm)]
    w: SignedPermutation,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_perm)]
    v: SignedPermutation,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rothe diagram of w.
    Rothe {
        #[command(flatten)]
        x: TypeW,
        /// Mark essential boxes with `E`.
        #[arg(long)]
        essential: bool,
    },
    /// Essential set of w.
    Essential {
        #[command(flatten)]
        x: TypeW,
    },
    /// Whether w is vexillary.
    Vexillary {
        #[command(flatten)]
        x: TypeW,
    },
    /// Triple of w, or with --from the element of a triple.
    Triple {
        #[arg(long = "type", value_parser = parse_type, required_unless_present = "from")]
        t: Option<LieType>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_perm, required_unless_present = "from")]
        w: Option<SignedPermutation>,
        /// A triple such as `k=1,2;p=3,1;q=3,2;type=C`.
        #[arg(long, value_parser = parse_triple, conflicts_with_all = ["t", "w"], requires = "n")]
        from: Option<Triple>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Shape λ of w, or of a triple given with --from.
    Shape {
        #[arg(long = "type", value_parser = parse_type, required_unless_present = "from")]
        t: Option<LieType>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_perm, required_unless_present = "from")]
        w: Option<SignedPermutation>,
        #[arg(long, value_parser = parse_triple, conflicts_with_all = ["t", "w"])]
        from: Option<Triple>,
    },
    /// Outer shape μ of the pair w ≤ v.
    OuterShape {
        #[command(flatten)]
        x: TypeWV,
    },
    /// Excited Young diagrams of λ inside μ.
    Excite {
        #[arg(long = "type", value_parser = parse_type)]
        t: LieType,
        #[arg(long, value_parser = parse_shape)]
        lambda: Shape,
        #[arg(long, value_parser = parse_shape)]
        mu: Shape,
        /// Print every diagram.
        #[arg(long)]
        list: bool,
        /// Expand the search frontier on several threads.
        #[arg(long)]
        parallel: bool,
    },
    /// Multiplicity of Ω_w at the point p_v.
    Mult {
        #[command(flatten)]
        x: TypeWV,
        /// Include every excited diagram.
        #[arg(long)]
        list: bool,
    },
    /// Whether p_v is a smooth point of Ω_w.
    Smooth {
        #[command(flatten)]
        x: TypeWV,
    },
    /// Check the labelling, echelon and rank statements for the matrix model.
    KlVerify {
        #[command(flatten)]
        x: TypeWV,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 101)]
        prime: u64,
        /// Print the labelled cell matrix and the top half of the direct sum.
        #[arg(long)]
        show: bool,
    },
    /// Every vexillary w and every v ≥ w in rank n, as JSON lines.
    Corpus {
        #[arg(long = "type", value_parser = parse_type)]
        t: LieType,
        #[arg(long)]
        n: usize,
    },
}

fn parse_type(s: &str) -> std::result::Result<LieType, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_perm(s: &str) -> std::result::Result<SignedPermutation, String> {
    SignedPermutation::parse(s).map_err(|e| e.to_string())
}

fn parse_triple(s: &str) -> std::result::Result<Triple, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_shape(s: &str) -> std::result::Result<Shape, String> {
    Shape::parse(s).map_err(|e| e.to_string())
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    json: bool,
    notation: Notation,
    seed: u64,
    cap: usize,
}

impl Ctx<'_> {
    fn perm(&self, w: &SignedPermutation) -> String {
        w.display_with(self.notation)
    }

    fn emit_json(&mut self, value: &impl Serialize) -> Result<()> {
        let text = serde_json::to_string(value).map_err(|e| Error::Invariant(e.to_string()))?;
        self.line(&text)
    }

    fn line(&mut self, text: &str) -> Result<()> {
        writeln!(self.out, "{text}").map_err(|e| Error::Capability(format!("write failed: {e}")))
    }

    fn text(&mut self, text: &str) -> Result<()> {
        write!(self.out, "{text}").map_err(|e| Error::Capability(format!("write failed: {e}")))
    }

    fn enumerate_options(&self, parallel: bool) -> EnumerateOptions {
        EnumerateOptions { parallel, cap: self.cap }
    }
}

/// Runs one invocation and returns its exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let mut ctx = Ctx {
        out,
        json: cli.format == Format::Json,
        notation: if cli.bar_notation { Notation::Bar } else { Notation::Minus },
        seed: cli.seed,
        cap: cli.state_cap.unwrap_or_else(default_state_cap),
    };
    match dispatch(cli.cmd, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let diag = json!({ "error": e.kind(), "message": e.to_string() });
            let _ = writeln!(err, "{diag}");
            e.exit_code()
        }
    }
}

fn dispatch(cmd: Command, ctx: &mut Ctx) -> Result<i32> {
    match cmd {
        Command::Rothe { x, essential } => {
            if ctx.json {
                let d = rothe_diagram(x.t, &x.w)?;
                ctx.emit_json(&BoxesJson::new(&d.boxes))?;
            } else {
                let text = render_rothe(x.t, &x.w, essential, ctx.notation)?;
                ctx.text(&text)?;
            }
        }
        Command::Essential { x } => {
            let e = essential_set(x.t, &x.w)?;
            if ctx.json {
                ctx.emit_json(&json!({ "boxes": BoxesJson::new(&e.boxes).boxes, "ordered": e.sw_ne }))?;
            } else {
                let text = render_rothe(x.t, &x.w, true, ctx.notation)?;
                ctx.text(&text)?;
                let cells: Vec<String> = e.boxes.iter().map(|&(r, c)| format!("({r},{c})")).collect();
                ctx.line(&format!("essential {}", cells.join(" ")))?;
            }
        }
        Command::Vexillary { x } => {
            let v = is_vexillary(x.t, &x.w)?;
            if ctx.json {
                ctx.emit_json(&json!({ "vexillary": v }))?;
            } else {
                ctx.line(&v.to_string())?;
            }
        }
        Command::Triple { t, w, from, n } => match (from, t, w) {
            (Some(tau), _, _) => {
                let n = n.expect("clap enforces --n");
                let w = perm_of_triple(&tau, n)?;
                if ctx.json {
                    ctx.emit_json(&json!({ "triple": tau, "w": w }))?;
                } else {
                    let text = ctx.perm(&w);
                    ctx.line(&text)?;
                }
            }
            (None, Some(t), Some(w)) => {
                let tau = triple_of(t, &w)?;
                if ctx.json {
                    ctx.emit_json(&tau)?;
                } else {
                    ctx.line(&tau.to_string())?;
                }
            }
            _ => unreachable!("clap enforces the argument groups"),
        },
        Command::Shape { t, w, from } => {
            let tau = match (from, t, w) {
                (Some(tau), _, _) => {
                    tau.validate(usize::MAX / 4)?;
                    tau
                }
                (None, Some(t), Some(w)) => triple_of(t, &w)?,
                _ => unreachable!("clap enforces the argument groups"),
            };
            let lam = shape_of(&tau)?;
            if ctx.json {
                ctx.emit_json(&json!({ "lambda": lam }))?;
            } else {
                ctx.line(&lam.to_string())?;
            }
        }
        Command::OuterShape { x } => {
            let wt = weak_triple(x.t, &x.w, &x.v)?;
            let mu = outer_shape(x.t, &x.w, &x.v)?;
            if ctx.json {
                ctx.emit_json(&json!({ "kprime": wt.kprime, "mu": mu }))?;
            } else {
                ctx.line(&mu.to_string())?;
            }
        }
        Command::Excite { t, lambda, mu, list, parallel } => {
            let states = enumerate_with(t, &lambda, &mu, ctx.enumerate_options(parallel))?;
            if ctx.json {
                let value = if list {
                    json!({ "count": states.len(), "states": states })
                } else {
                    json!({ "count": states.len() })
                };
                ctx.emit_json(&value)?;
            } else {
                ctx.line(&states.len().to_string())?;
                if list {
                    let region = Region::new(t, &mu)?;
                    for s in &states {
                        ctx.line("")?;
                        ctx.text(&render_state(&region, s))?;
                    }
                }
            }
        }
        Command::Mult { x, list } => {
            let opts = MultiplicityOptions { list_states: list, enumerate: ctx.enumerate_options(false) };
            let report = multiplicity_with(x.t, &x.w, &x.v, opts)?;
            if ctx.json {
                ctx.emit_json(&report)?;
            } else {
                print_report(ctx, &report)?;
            }
        }
        Command::Smooth { x } => {
            let opts = MultiplicityOptions { list_states: false, enumerate: ctx.enumerate_options(false) };
            let report = multiplicity_with(x.t, &x.w, &x.v, opts)?;
            let smooth = report.multiplicity == 1;
            if ctx.json {
                ctx.emit_json(&json!({ "smooth": smooth, "multiplicity": report.multiplicity }))?;
            } else {
                ctx.line(&smooth.to_string())?;
            }
        }
        Command::KlVerify { x, trials, prime, show } => return kl_verify(ctx, x, trials, prime, show),
        Command::Corpus { t, n } => corpus(ctx, t, n)?,
    }
    Ok(EXIT_OK)
}

fn print_report(ctx: &mut Ctx, r: &MultiplicityReport) -> Result<()> {
    let tau = Triple { t: r.t, k: r.k.clone(), p: r.p.clone(), q: r.q.clone() };
    let kp: Vec<String> = r.kprime.iter().map(|x| x.to_string()).collect();
    let lines = [
        format!("type {}", r.t),
        format!("w {}", ctx.perm(&r.w)),
        format!("v {}", ctx.perm(&r.v)),
        format!("triple {tau}"),
        format!("kprime {}", kp.join(",")),
        format!("lambda {}", r.lambda),
        format!("mu {}", r.mu),
        format!("multiplicity {}", r.multiplicity),
    ];
    for l in lines {
        ctx.line(&l)?;
    }
    if let Some(states) = &r.states {
        let region = Region::new(r.t, &r.mu)?;
        for s in states {
            ctx.line("")?;
            ctx.text(&render_state(&region, s))?;
        }
    }
    Ok(())
}

fn kl_verify(ctx: &mut Ctx, x: TypeWV, trials: usize, prime: u64, show: bool) -> Result<i32> {
    let wt = weak_triple(x.t, &x.w, &x.v)?;
    let labels = label_count_check_for(&wt, &x.v)?;
    if !is_coset_minimal(&x.v, &wt.base) {
        return Err(Error::NotCosetMinimal(format!(
            "{} has a descent inside the blocks of p = {:?}",
            x.v, wt.base.p
        )));
    }
    let survivors = echelon_survivor_check_for(&wt, &x.v)?;
    let rank = rank_claim_check_for(&wt, &x.v, trials, prime, ctx.seed)?;
    let accounting = if x.t.is_signed() { Some(accounting_identity(&wt, x.v.n())?) } else { None };
    let ok = labels.ok && survivors.ok && rank.ok && accounting.unwrap_or(true);
    if ctx.json {
        ctx.emit_json(&json!({
            "type": x.t,
            "w": x.w,
            "v": x.v,
            "kprime": wt.kprime,
            "labels": labels,
            "survivors": { "count": survivors.survivors.len(), "expected": survivors.expected, "type_b": survivors.type_b, "ok": survivors.ok },
            "rank": { "trials": rank.trials, "prime": rank.prime, "seed": rank.seed, "structural_ok": rank.structural_ok, "failures": rank.failures.len(), "ok": rank.ok },
            "accounting": accounting,
            "ok": ok,
        }))?;
    } else {
        let verdict = |b: bool| if b { "ok" } else { "FAILED" };
        let lines = [
            format!("labelled entries {} of {} expected: {}", labels.labelled, labels.expected, verdict(labels.ok)),
            format!(
                "type (b) survivors {} of {} expected: {}",
                survivors.survivors.len(),
                survivors.expected,
                verdict(survivors.ok)
            ),
            format!(
                "rank claim over F_{} with {} trials, seed {}: {}",
                rank.prime,
                rank.trials,
                rank.seed,
                verdict(rank.ok)
            ),
        ];
        for l in lines {
            ctx.line(&l)?;
        }
        if let Some(a) = accounting {
            ctx.line(&format!("label accounting: {}", verdict(a)))?;
        }
        if show {
            let ds = direct_sum_matrix_for(&wt, &x.v)?;
            ctx.line("")?;
            let p: Vec<usize> = ds.extended.ptilde.clone();
            let text = ds.cell().render(&p);
            ctx.text(&text)?;
            ctx.line("")?;
            let text = ds.render_mirrored();
            ctx.text(&text)?;
        }
    }
    if ok {
        Ok(EXIT_OK)
    } else {
        Err(Error::Invariant("a matrix-model check failed".into()))
    }
}

#[derive(Serialize)]
struct CorpusSummary {
    #[serde(rename = "type")]
    t: LieType,
    n: usize,
    pairs: usize,
    singular: usize,
    max_multiplicity: u64,
}

fn corpus(ctx: &mut Ctx, t: LieType, n: usize) -> Result<()> {
    let order = group_order(t, n);
    if order > CORPUS_MAX_ORDER {
        return Err(Error::Capability(format!(
            "corpus is limited to groups of order ≤ {CORPUS_MAX_ORDER}, type {t} n={n} has {order}"
        )));
    }
    let closure = CoverClosure::new(t, n)?;
    let mut vex: Vec<SignedPermutation> = elements(t, n).filter(|w| is_vexillary(t, w).unwrap_or(false)).collect();
    vex.sort();
    let opts = MultiplicityOptions { list_states: false, enumerate: ctx.enumerate_options(false) };
    let mut reports: Vec<MultiplicityReport> = vex
        .par_iter()
        .map(|w| {
            let mut ups = closure.upper_set(w);
            ups.sort();
            ups.iter()
                .map(|v| {
                    debug_assert!(bruhat_leq(t, w, v).unwrap_or(false));
                    multiplicity_with(t, w, v, opts)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    reports.sort_by(|a, b| (&a.w, &a.v).cmp(&(&b.w, &b.v)));
    for r in &reports {
        ctx.emit_json(r)?;
    }
    let summary = CorpusSummary {
        t,
        n,
        pairs: reports.len(),
        singular: reports.iter().filter(|r| r.multiplicity > 1).count(),
        max_multiplicity: reports.iter().map(|r| r.multiplicity).max().unwrap_or(0),
    };
    ctx.emit_json(&json!({ "summary": summary }))
}
