//! `predimlab`: structure checks, closures, example constructions and the
//! verification suites.
//!
//! Exit codes: 0 when no case failed, 1 when some case failed, 2 on usage or
//! input errors.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use predimlab::file::{parse, write, write_structure};
use predimlab::report::{ids_text, parse_ids, Case, Status, VerificationReport};
use predimlab::{
    audit_extension_property, axiom_suite, beatty, build_example_511, build_example_511_step2, build_example_512,
    build_gadget, build_generic, check_beatty_sequence, check_characterization, check_example_511,
    check_example_511_step2, check_example_512, cl0, cld, count_msa_copies, d_independent, dim, enumerate_tasks,
    example_511_bases, example_511_control, example_512_base, example_512_control, in_c0, in_cf, in_kn, is_msa,
    is_simply_algebraic, membership_case, msa_base, perp, replay_case, run_suite, verify_gadget, BuildConfig, Caps,
    Class, ControlFunction, Document, MsaType, Signature, SuiteOptions, Verdict, VertexSet, Witness, AXIOMS,
};

type Failure = Box<dyn std::error::Error>;

#[derive(Parser)]
#[command(
    name = "predimlab",
    version,
    about = "Finite predimension calculus and verification suites"
)]
struct Cli {
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    report: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Free vertices allowed in an exhaustive subset scan.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    #[value(alias = "json")]
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassName {
    C0,
    Cf,
    Kn,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClosureKind {
    Cl0,
    Cld,
}

#[derive(Subcommand)]
enum Command {
    /// Class membership of a structure.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        class: ClassName,
        #[arg(long)]
        ngon: Option<u32>,
        /// Control function: `harmonic` or `harmonic*p/q`.
        #[arg(long, default_value = "harmonic")]
        f: String,
        /// Random connected sets drawn when the check is not exhaustive.
        #[arg(long)]
        samples: Option<usize>,
    },
    /// `cl_0` or `cl^d` of a vertex set.
    Closure {
        file: PathBuf,
        /// Ids such as `0,1,2`, or the name of a set in the file.
        #[arg(long)]
        set: String,
        #[arg(long, value_enum, default_value_t = ClosureKind::Cl0)]
        kind: ClosureKind,
    },
    /// Predimension of a set, optionally relative to a second set.
    Delta {
        file: PathBuf,
        #[arg(long)]
        set: String,
        #[arg(long)]
        over: Option<String>,
    },
    /// d-independence of `A` and `C` over `B`.
    Indep {
        file: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        /// Also test `A ⊥_B C`.
        #[arg(long)]
        perp: bool,
        /// Also compare with the structural characterization.
        #[arg(long)]
        characterize: bool,
    },
    /// Independence axioms over the d-closed sets of at most `--cap` points
    /// (default 2).
    Axioms { file: PathBuf },
    /// Whether `base ∪ ext` is a minimally simply algebraic extension of `base`.
    Msa {
        file: PathBuf,
        #[arg(long)]
        base: String,
        #[arg(long)]
        ext: String,
        /// Write the msa type in the predimlab/1 format.
        #[arg(long)]
        type_out: Option<PathBuf>,
    },
    /// Copies of an msa type over a set.
    Mult {
        file: PathBuf,
        #[arg(long)]
        over: String,
        /// A predimlab/1 file with the type and a set named `base`.
        #[arg(long = "type")]
        type_file: PathBuf,
    },
    /// The gadget `X ⊆ Y` for a signature.
    Gadget {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        verify: bool,
    },
    /// The Beatty sequence of `l/b` and its window sums.
    Beatty {
        #[arg(long)]
        l: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        window: Option<u32>,
    },
    /// The first example structure for hypergraphs of arity `r`.
    Ex511 {
        #[arg(long)]
        r: usize,
        /// Label of the base, as printed in the `ex511` suite.
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        step: u8,
    },
    /// The second example structure, from `s` copies and step `l`.
    Ex512 {
        #[arg(long)]
        s: u32,
        #[arg(long)]
        step: u32,
        #[arg(long, default_value = "edge")]
        variant: String,
    },
    /// A finite approximant of the generic structure.
    Build {
        #[arg(long, value_enum)]
        class: ClassName,
        #[arg(long, default_value_t = 2)]
        n: u32,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value = "harmonic")]
        f: String,
        #[arg(long)]
        ngon: Option<u32>,
        #[arg(long, default_value_t = 3)]
        max_pattern: usize,
        #[arg(long, default_value_t = 100)]
        budget: usize,
    },
    /// Extension-property audit of a structure.
    Audit {
        file: PathBuf,
        /// Largest extension pattern.
        #[arg(long, default_value_t = 3)]
        tasks: usize,
        #[arg(long, value_enum, default_value_t = ClassName::C0)]
        class: ClassName,
        #[arg(long, default_value = "harmonic")]
        f: String,
        #[arg(long)]
        ngon: Option<u32>,
        /// Base copies checked per task.
        #[arg(long, default_value_t = 10)]
        per_task: usize,
    },
    /// Run a named verification suite.
    Verify {
        suite: String,
        #[arg(long)]
        negative_control: bool,
    },
    /// Replay the FAIL witnesses of a machine report.
    Replay { report_file: PathBuf },
}

enum Output {
    Report(VerificationReport),
    /// A predimlab/1 document and the exit code of its checks.
    Document(String, u8),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|out| emit(&cli, out)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("predimlab: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, out: Output) -> Result<u8, Failure> {
    let (text, code) = match out {
        Output::Report(r) => {
            let text = match cli.report {
                Format::Text => r.to_text(),
                Format::Machine => r.to_machine(),
            };
            (text, r.exit_code() as u8)
        }
        Output::Document(text, code) => (text, code),
    };
    match &cli.out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(code)
}

fn caps(cli: &Cli) -> Caps {
    let mut caps = Caps::from_env();
    if let Some(c) = cli.cap {
        caps.subset = c;
    }
    caps
}

fn load(path: &Path) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(parse(&text)?)
}

/// Ids written as `0,1,2` or `{0,1,2}`, or the name of a set in `doc`.
fn ids_arg(doc: &Document, text: &str) -> Result<Vec<u32>, Failure> {
    let t = text.trim();
    if let Ok(ids) = doc.set(t) {
        return Ok(ids.to_vec());
    }
    let braced = if t.starts_with('{') {
        t.to_string()
    } else {
        format!("{{{t}}}")
    };
    parse_ids(&braced).ok_or_else(|| format!("cannot read vertex ids from {text:?}").into())
}

fn set_arg(doc: &Document, text: &str) -> Result<(Vec<u32>, VertexSet), Failure> {
    let ids = ids_arg(doc, text)?;
    let set = doc.structure.set_of(&ids)?;
    Ok((ids, set))
}

fn class_of(name: ClassName, sig: Signature, f: &str, ngon: Option<u32>) -> Result<Class, Failure> {
    Ok(match name {
        ClassName::C0 => Class::c0(sig),
        ClassName::Cf => {
            let f = ControlFunction::parse(f, sig.vertex_weight())?;
            Class::cf(sig, f)
        }
        ClassName::Kn => Class::kn(ngon.ok_or("class kn needs --ngon")?)?,
    })
}

fn report(name: &str, cli: &Cli) -> VerificationReport {
    VerificationReport::new(name, cli.seed)
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let caps = caps(cli);
    Ok(match &cli.command {
        Command::Check {
            file,
            class,
            ngon,
            f,
            samples,
        } => {
            let doc = load(file)?;
            let s = &doc.structure;
            let mut caps = caps.clone();
            if let Some(k) = samples {
                caps.samples = *k;
            }
            let mut rep = report("check", cli);
            match class {
                ClassName::C0 => {
                    let m = in_c0(s);
                    let mut case = Case::new("c0/membership", status(m.verdict), m.note.clone());
                    if let Some(w) = &m.witness {
                        case = case
                            .with_witness(
                                Witness::new("delta-below")
                                    .set("set", s, w)
                                    .field("bound", 0)
                                    .to_string(),
                            )
                            .with_structure(write_structure(s));
                    }
                    rep.push(case);
                }
                ClassName::Cf => {
                    let f = ControlFunction::parse(f, s.signature().vertex_weight())?;
                    let m = in_cf(s, &f, &caps, cli.seed);
                    rep.push(membership_case("cf/membership".into(), s, &m, &f));
                }
                ClassName::Kn => {
                    let n = ngon.ok_or("class kn needs --ngon")?;
                    let m = in_kn(s, n, &caps)?;
                    let mut detail = m.note.clone();
                    let mut case = Case::new("kn/membership", status(m.verdict), "");
                    if let Some(w) = &m.witness {
                        write!(detail, "; witness {}", ids_text(&s.ids_of(w)))?;
                        case = case
                            .with_witness(Witness::new("kn-rejected").field("ngon", n).to_string())
                            .with_structure(write_structure(s));
                    }
                    case.detail = detail;
                    rep.push(case);
                }
            }
            Output::Report(rep.finish())
        }
        Command::Closure { file, set, kind } => {
            let doc = load(file)?;
            let s = &doc.structure;
            let (ids, x) = set_arg(&doc, set)?;
            let mut rep = report("closure", cli);
            match kind {
                ClosureKind::Cl0 => {
                    let c = cl0(s, &x)?;
                    let trace: Vec<String> = c.trace.iter().map(|t| ids_text(&s.ids_of(t))).collect();
                    rep.push(Case::new(
                        "cl0",
                        Status::Pass,
                        format!(
                            "cl0({}) = {}, dim = {}, absorbed: {}",
                            ids_text(&ids),
                            ids_text(&s.ids_of(&c.closure)),
                            c.dimension,
                            if trace.is_empty() {
                                "nothing".into()
                            } else {
                                trace.join(" then ")
                            }
                        ),
                    ));
                }
                ClosureKind::Cld => {
                    let c = cld(s, &x)?;
                    rep.push(Case::new(
                        "cld",
                        Status::Pass,
                        format!(
                            "cl^d({}) = {}, dim = {}",
                            ids_text(&ids),
                            ids_text(&s.ids_of(&c)),
                            dim(s, &x)?
                        ),
                    ));
                }
            }
            Output::Report(rep.finish())
        }
        Command::Delta { file, set, over } => {
            let doc = load(file)?;
            let s = &doc.structure;
            let (ids, x) = set_arg(&doc, set)?;
            let detail = match over {
                None => format!("delta({}) = {}", ids_text(&ids), s.delta(&x)),
                Some(o) => {
                    let (bids, b) = set_arg(&doc, o)?;
                    format!(
                        "delta({} / {}) = {}",
                        ids_text(&ids),
                        ids_text(&bids),
                        s.delta_rel(&x.union(&b), &b)
                    )
                }
            };
            let mut rep = report("delta", cli);
            rep.push(Case::new("delta", Status::Pass, detail));
            Output::Report(rep.finish())
        }
        Command::Indep {
            file,
            a,
            b,
            c,
            perp: want_perp,
            characterize,
        } => {
            let doc = load(file)?;
            let s = &doc.structure;
            let (ai, aset) = set_arg(&doc, a)?;
            let (bi, bset) = set_arg(&doc, b)?;
            let (ci, cset) = set_arg(&doc, c)?;
            let mut rep = report("indep", cli);
            let ind = d_independent(s, &aset, &bset, &cset)?;
            let triple = |w: Witness| w.ids("a", &ai).ids("b", &bi).ids("c", &ci);
            let mut case = Case::check(
                "independent",
                ind,
                format!("{} ⫫ {} over {}: {ind}", ids_text(&ai), ids_text(&ci), ids_text(&bi)),
            );
            if !ind {
                case = case
                    .with_witness(triple(Witness::new("indep-differs")).field("claimed", true).to_string())
                    .with_structure(write_structure(s));
            }
            rep.push(case);
            if *characterize {
                let ch = check_characterization(s, &aset, &bset, &cset)?;
                let mut case = Case::check(
                    "characterization",
                    ch.holds() == ind,
                    format!(
                        "X = {}, Y = {}, meet {}, free {}, strong {}",
                        ids_text(&s.ids_of(&ch.x)),
                        ids_text(&s.ids_of(&ch.y)),
                        ch.meet,
                        ch.free,
                        ch.strong
                    ),
                );
                if ch.holds() != ind {
                    case = case
                        .with_witness(triple(Witness::new("charact-differs")).to_string())
                        .with_structure(write_structure(s));
                }
                rep.push(case);
            }
            if *want_perp {
                let p = perp(s, &aset, &bset, &cset)?;
                let mut case = Case::check(
                    "perp",
                    p,
                    format!("{} ⊥ {} over {}: {p}", ids_text(&ai), ids_text(&ci), ids_text(&bi)),
                );
                if !p {
                    case = case
                        .with_witness(
                            Witness::new("not-perp")
                                .ids("b", &ai)
                                .ids("a", &bi)
                                .ids("c", &ci)
                                .to_string(),
                        )
                        .with_structure(write_structure(s));
                }
                rep.push(case);
            }
            Output::Report(rep.finish())
        }
        Command::Axioms { file } => {
            let size = &cli.cap.unwrap_or(2);
            let doc = load(file)?;
            let s = &doc.structure;
            let ar = axiom_suite(s, *size)?;
            let mut rep = report("axioms", cli);
            rep.note(format!("{} d-closed sets with at most {size} points", ar.closed_sets));
            for axiom in AXIOMS {
                let checked = ar.checked.get(axiom).copied().unwrap_or(0);
                let mut case = Case::new(axiom, Status::Pass, format!("{checked} instances"));
                if let Some(v) = ar.violations.iter().find(|v| v.axiom == axiom) {
                    let mut w = Witness::new("axiom").field("axiom", axiom).field("cap", size);
                    for (i, set) in v.sets.iter().enumerate() {
                        w = w.ids(&format!("s{i}"), set);
                    }
                    case.status = Status::Fail;
                    case = case.with_witness(w.to_string()).with_structure(write_structure(s));
                }
                rep.push(case);
            }
            Output::Report(rep.finish())
        }
        Command::Msa {
            file,
            base,
            ext,
            type_out,
        } => {
            let doc = load(file)?;
            let s = &doc.structure;
            let (zi, z) = set_arg(&doc, base)?;
            let (_, w) = set_arg(&doc, ext)?;
            let y = z.union(&w);
            let sa = is_simply_algebraic(s, &z, &y, caps.subset)?;
            let minimal = sa && is_msa(s, &z, &y, caps.subset)?;
            let mut rep = report("msa", cli);
            rep.push(Case::check(
                "simply-algebraic",
                sa,
                format!(
                    "{} over {}, delta(Y/Z) = {}",
                    ids_text(&s.ids_of(&y)),
                    ids_text(&zi),
                    s.delta_rel(&y, &z)
                ),
            ));
            rep.push(Case::check("minimal", minimal, "no proper sa extension inside"));
            if sa {
                let mb = msa_base(s, &z, &y, caps.subset)?;
                rep.note(format!("base Z1 = {}", ids_text(&s.ids_of(&mb.base))));
                if let (true, Some(path)) = (minimal, type_out) {
                    let t = MsaType::of(s, &mb.base, &y.difference(&z))?;
                    let text = write(&Document::new(t.structure.clone()).with_set("base", t.base.clone()));
                    std::fs::write(path, text)?;
                }
            }
            Output::Report(rep.finish())
        }
        Command::Mult { file, over, type_file } => {
            let doc = load(file)?;
            let s = &doc.structure;
            let (ai, a) = set_arg(&doc, over)?;
            let tdoc = load(type_file)?;
            let t = MsaType::new(tdoc.structure.clone(), tdoc.set("base")?.to_vec())?;
            let found = count_msa_copies(s, &a, &t)?;
            let shown = if found.count >= caps.saturation {
                format!("{} (saturated at {})", found.count, caps.saturation)
            } else {
                found.count.to_string()
            };
            let copies: Vec<String> = found.copies.iter().map(|c| ids_text(&s.ids_of(c))).collect();
            let mut rep = report("mult", cli);
            rep.push(Case::new(
                "multiplicity",
                Status::Pass,
                format!("copies over {}: {shown} {}", ids_text(&ai), copies.join(" ")),
            ));
            Output::Report(rep.finish())
        }
        Command::Gadget { n, m, r, verify } => {
            let g = build_gadget(*n, *m, *r)?;
            let mut head = format!(
                "# gadget n={n} m={m} r={r}, |Y| = {}, |X| = {}",
                g.structure.len(),
                g.x.len()
            );
            if g.degenerate {
                head.push_str(", degenerate parameters");
            }
            head.push('\n');
            let mut code = 0;
            if *verify {
                let ch = verify_gadget(&g, caps.gadget)?;
                writeln!(head, "# delta(Y/X) = {}", ch.delta_rel)?;
                writeln!(head, "# clause 1: {}", ch.clause1)?;
                writeln!(
                    head,
                    "# clause 2: {}",
                    ch.clause2.as_ref().map_or("holds".into(), |u| format!(
                        "fails at {}",
                        ids_text(&g.structure.ids_of(u))
                    ))
                )?;
                writeln!(
                    head,
                    "# clause 3: {}",
                    ch.clause3.as_ref().map_or("holds".into(), |z| format!(
                        "fails at {}",
                        ids_text(&g.structure.ids_of(z))
                    ))
                )?;
                if !ch.holds() && !g.degenerate {
                    code = 1;
                }
            }
            let body = write(&Document::new(g.structure.clone()).with_set("x", g.x.clone()));
            Output::Document(head + &body, code)
        }
        Command::Beatty { l, b, window } => {
            let seq = beatty(*l, *b)?;
            let mut rep = report("beatty", cli);
            let bits: String = seq.period.iter().map(|d| char::from(b'0' + d)).collect();
            rep.note(format!("period a_1..a_b = {bits}"));
            if let Some(w) = window {
                let sums: Vec<String> = (0..*b as i64).map(|i| seq.window(i, *w as i64).to_string()).collect();
                rep.note(format!(
                    "sums of a_(i+1)..a_(i+{w}) for i = 0..{}: {}",
                    b - 1,
                    sums.join(" ")
                ));
            }
            rep.push(check_beatty_sequence(format!("b{b:02}/l{l:02}"), &seq));
            Output::Report(rep.finish())
        }
        Command::Ex511 { r, base, step } => {
            let f = example_511_control();
            let bases = example_511_bases(*r, &f, &caps)?;
            let chosen = match base {
                Some(label) => bases.iter().find(|b| &b.label == label).ok_or_else(|| {
                    format!(
                        "no base {label}; known: {}",
                        bases.iter().map(|b| b.label.as_str()).collect::<Vec<_>>().join(", ")
                    )
                })?,
                None => bases.first().ok_or("no bases")?,
            };
            let mut head = format!("# example with r = {r}, base {}, f = {f}\n", chosen.label);
            let (doc, holds) = if *step == 1 {
                let ex = build_example_511(&chosen.b, &chosen.a, chosen.point)?;
                let ch = check_example_511(&ex, &f, &caps)?;
                writeln!(
                    head,
                    "# membership {:?}, copies closed {}, A c closed {}, c perp A {}",
                    ch.membership.verdict,
                    ch.copies_closed.iter().all(|&c| c),
                    ch.ac_closed,
                    ch.c_perp_a
                )?;
                let mut doc = Document::new(ex.structure.clone())
                    .with_set("a", ex.a.clone())
                    .with_set("c", vec![ex.c]);
                for (i, copy) in ex.copies.iter().enumerate() {
                    doc = doc.with_set(&format!("b{}", i + 1), copy.clone());
                }
                (doc, ch.holds())
            } else {
                let ex = build_example_511_step2(&chosen.b, &chosen.a, chosen.point)?;
                let ch = check_example_511_step2(&ex, &f, &caps)?;
                writeln!(
                    head,
                    "# membership {:?}, a in cl^d(e) {}, a in cl^d(A e) {}",
                    ch.membership.verdict, ch.a_in_closure_of_e, ch.a_in_closure_of_ae
                )?;
                let doc = Document::new(ex.structure.clone())
                    .with_set("a", ex.a.clone())
                    .with_set("e", ex.e.clone());
                (doc, ch.holds())
            };
            Output::Document(head + &write(&doc), u8::from(!holds))
        }
        Command::Ex512 { s, step, variant } => {
            let f = example_512_control();
            let (bp, a, point) = example_512_base(variant)?;
            let ex = build_example_512(*s, *step, &bp, &a, point)?;
            let ch = check_example_512(&ex)?;
            let head = format!(
                "# example with s = {s}, l = {step}, base {variant}: |E| = {}, delta(E) = {}, delta(B) = {}, cl^d(B) = E {}, f = {f}\n",
                ex.structure.len(),
                ch.delta_e,
                ch.delta_b,
                ch.e_is_closure_of_b
            );
            let doc = Document::new(ex.structure.clone())
                .with_set("a", ex.a.clone())
                .with_set("c", ex.c.clone())
                .with_set("d", ex.d.clone())
                .with_set("b_points", ex.b_points.clone());
            Output::Document(head + &write(&doc), u8::from(!ch.holds()))
        }
        Command::Build {
            class,
            n,
            m,
            r,
            f,
            ngon,
            max_pattern,
            budget,
        } => {
            let class = class_of(*class, Signature::single(*n, *m, *r)?, f, *ngon)?;
            let config = BuildConfig {
                class,
                max_pattern: *max_pattern,
                budget: *budget,
                seed: cli.seed,
            };
            let (s, log) = build_generic(&config, &caps)?;
            if let Some(path) = &cli.out {
                let mut log_path = path.clone().into_os_string();
                log_path.push(".log.json");
                std::fs::write(log_path, log.to_json())?;
            }
            let head = format!(
                "# {}: {} steps, {} vertices, digest {}\n",
                log.label,
                log.steps.len(),
                s.len(),
                log.digest
            );
            Output::Document(head + &write_structure(&s), 0)
        }
        Command::Audit {
            file,
            tasks,
            class,
            f,
            ngon,
            per_task,
        } => {
            let doc = load(file)?;
            let s = &doc.structure;
            let class = class_of(*class, s.signature().clone(), f, *ngon)?;
            let list = enumerate_tasks(&class, *tasks, &caps)?;
            let audit = audit_extension_property(s, &list, *per_task)?;
            let mut rep = report("audit", cli);
            rep.note(format!(
                "{} tasks, first {per_task} strong base copies each; bases of two or more points are informational",
                list.len()
            ));
            for (t, ta) in list.iter().zip(&audit.tasks) {
                let full = ta.realized == ta.checked;
                let st = match (full, t.base.len() <= 1) {
                    (true, _) => Status::Pass,
                    (false, true) => Status::Fail,
                    (false, false) => Status::Partial,
                };
                let mut case = Case::new(
                    format!("task{:02}", ta.task),
                    st,
                    format!("{}: {}/{} base copies extended", ta.label, ta.realized, ta.checked),
                );
                if let (Status::Fail, Some(missing)) = (st, &ta.missing) {
                    case = case.with_witness(format!("no extension over {}", ids_text(missing)));
                }
                rep.push(case);
            }
            rep.note(format!("realized ratio {:.3}", audit.ratio()));
            Output::Report(rep.finish())
        }
        Command::Verify {
            suite,
            negative_control,
        } => {
            let opts = SuiteOptions {
                seed: cli.seed,
                caps,
                negative_control: *negative_control,
            };
            Output::Report(run_suite(suite, &opts)?)
        }
        Command::Replay { report_file } => {
            let text = std::fs::read_to_string(report_file).map_err(|e| format!("{}: {e}", report_file.display()))?;
            let original = VerificationReport::from_machine(&text)?;
            let mut rep = report("replay", cli);
            rep.note(format!("witnesses of suite {}", original.suite));
            for c in original.cases.iter().filter(|c| c.status == Status::Fail) {
                let reproduced = replay_case(c, &caps)?;
                rep.push(Case::check(
                    c.key.clone(),
                    reproduced,
                    format!("witness {}", c.witness.as_deref().unwrap_or("")),
                ));
            }
            Output::Report(rep.finish())
        }
    })
}

fn status(v: Verdict) -> Status {
    match v {
        Verdict::Pass => Status::Pass,
        Verdict::Fail => Status::Fail,
        Verdict::Partial => Status::Partial,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_from_text_or_name() {
        let s = predimlab::FiniteStructure::graph(2, 1, 3, &[(0, 1)]).unwrap();
        let doc = Document::new(s).with_set("base", vec![0, 2]);
        assert_eq!(ids_arg(&doc, "base").unwrap(), vec![0, 2]);
        assert_eq!(ids_arg(&doc, "1,2").unwrap(), vec![1, 2]);
        assert_eq!(ids_arg(&doc, "{0}").unwrap(), vec![0]);
        assert_eq!(ids_arg(&doc, "").unwrap(), Vec::<u32>::new());
        assert!(ids_arg(&doc, "x,y").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
