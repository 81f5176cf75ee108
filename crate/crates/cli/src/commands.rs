//! Subcommand bodies. Every command renders its result in the configured
//! format; exact rationals always appear as `num/den`.

use std::collections::BTreeSet;
use std::io::Write;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use easyqg::category::{axioms_hold, generate};
use easyqg::classify::{self, Capping, Report};
use easyqg::laws::{self, Law};
use easyqg::mc::Estimate;
use easyqg::partition::{self, enumerate};
use easyqg::rational::{format_rational, parse_rational};
use easyqg::tensor::{self, Element, GroupTag};
use easyqg::weingarten::{self, MomentRequest};
use easyqg::{CategoryId, Modulus, Partition, RationalMatrix, Row, Side, SpecialPartition};

use crate::{CliError, Command, Format, PartitionOp, RowArg, RunConfig, SideArg};

type Out<'a> = &'a mut dyn Write;
type Res = Result<(), CliError>;

fn category(s: &str) -> Result<CategoryId, CliError> {
    Ok(s.parse()?)
}

fn part(s: &str) -> Result<Partition, CliError> {
    Ok(partition::parse(s)?)
}

fn group(s: &str) -> Result<GroupTag, CliError> {
    Ok(s.parse()?)
}

fn q(r: &BigRational) -> String {
    format_rational(r)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn write_json(out: Out, v: &impl Serialize) -> Res {
    let text = serde_json::to_string_pretty(v).map_err(|e| CliError::Io(e.into()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

/// A result that is one named scalar.
fn scalar(out: Out, cfg: &RunConfig, name: &str, value: &str, context: Value) -> Res {
    match cfg.format {
        Format::Text => writeln!(out, "{value}")?,
        Format::Csv => writeln!(out, "{name}\n{}", csv_field(value))?,
        Format::Json => {
            let mut obj = context;
            obj[name] = Value::String(value.to_string());
            write_json(out, &obj)?;
        }
    }
    Ok(())
}

/// One partition per line, or a JSON array written element by element.
fn partitions<'p>(out: Out, cfg: &RunConfig, items: impl Iterator<Item = &'p Partition>) -> Res {
    stream(out, cfg, items.map(partition::format))
}

fn stream(out: Out, cfg: &RunConfig, items: impl Iterator<Item = String>) -> Res {
    match cfg.format {
        Format::Text => {
            for s in items {
                writeln!(out, "{s}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "partition")?;
            for s in items {
                writeln!(out, "{}", csv_field(&s))?;
            }
        }
        Format::Json => {
            write!(out, "[")?;
            for (i, s) in items.enumerate() {
                let sep = if i == 0 { "" } else { "," };
                write!(out, "{sep}\n  {}", Value::String(s))?;
            }
            writeln!(out, "\n]")?;
        }
    }
    Ok(())
}

fn matrix(out: Out, cfg: &RunConfig, m: &RationalMatrix) -> Res {
    let cells = m.to_strings();
    match cfg.format {
        Format::Text => {
            for row in &cells {
                writeln!(out, "{}", row.join(" "))?;
            }
        }
        Format::Csv => {
            writeln!(out, "row,column,value")?;
            for (r, row) in cells.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    writeln!(out, "{},{},{v}", r + 1, c + 1)?;
                }
            }
        }
        Format::Json => write_json(out, &json!({ "index": m.index(), "entries": cells }))?,
    }
    Ok(())
}

fn series(out: Out, cfg: &RunConfig, s: &laws::MomentSeries) -> Res {
    match cfg.format {
        Format::Text => {
            for (k, v) in s.values.iter().enumerate() {
                writeln!(out, "{} {}", k + 1, q(v))?;
            }
        }
        Format::Csv => {
            writeln!(out, "k,value")?;
            for (k, v) in s.values.iter().enumerate() {
                writeln!(out, "{},{}", k + 1, q(v))?;
            }
        }
        Format::Json => write_json(out, s)?,
    }
    Ok(())
}

fn estimate_text(e: &Estimate) -> String {
    format!("{:.6} +- {:.6} ({} samples)", e.mean, e.std_error, e.samples)
}

fn indices(s: &str) -> Result<Vec<usize>, CliError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--delta: bad index '{x}'")))
        })
        .collect()
}

fn report(out: Out, cfg: &RunConfig, r: &Report) -> Res {
    // reports are structured, so text falls back to JSON too
    match cfg.format {
        Format::Csv => {
            writeln!(out, "lemma,case,bound,checked_count,failure")?;
            let case = r.case.map_or(String::new(), |c| c.to_string());
            for f in &r.failures {
                writeln!(out, "{},{case},{},{},{}", r.lemma, r.bound, r.checked_count, csv_field(f))?;
            }
            Ok(())
        }
        _ => write_json(out, r),
    }
}

pub fn dispatch(cmd: &Command, cfg: &RunConfig, out: Out) -> Res {
    match cmd {
        Command::Enum { shape, category: c, count } => {
            let (k, l) = *shape;
            let all = enumerate(k, l, cfg.max_legs)?;
            let c = c.as_deref().map(category).transpose()?;
            let mut items = all.filter(|p| c.is_none_or(|c| c.contains(p)));
            if *count {
                let n = items.count();
                return scalar(out, cfg, "count", &n.to_string(), json!({ "shape": [k, l] }));
            }
            stream(out, cfg, items.by_ref().map(|p| partition::format(&p)))
        }
        Command::Member { category: c, partition: p } => {
            let (c, p) = (category(c)?, part(p)?);
            let ctx = json!({ "category": c, "partition": p });
            scalar(out, cfg, "member", &c.contains(&p).to_string(), ctx)
        }
        Command::Gram { category: c, k, n, from_vectors } => {
            let c = category(c)?;
            let g = if *from_vectors {
                tensor::gram_from_vectors(&weingarten::diagrams(&c, *k)?, *n, cfg.budget)?
            } else {
                weingarten::gram_matrix(&c, *k, *n)?
            };
            matrix(out, cfg, &g)
        }
        Command::Weingarten { category: c, k, n } => {
            matrix(out, cfg, &weingarten::weingarten_matrix(&category(c)?, *k, *n)?)
        }
        Command::Integrate { category: c, n, i, j } => {
            let c = category(c)?;
            let v = weingarten::haar_integral(&c, *n, i, j)?;
            let ctx = json!({ "category": c, "n": n, "i": i, "j": j });
            scalar(out, cfg, "value", &q(&v), ctx)
        }
        Command::Moments { category: c, n, k, m, t } => {
            let c = category(c)?;
            let req = match (m, t) {
                (Some(m), _) => MomentRequest::new(c, *n, *k, *m)?,
                (None, Some(t)) => MomentRequest::with_fraction(c, *n, *k, &parse_rational(t)?)?,
                (None, None) => MomentRequest::new(c, *n, *k, *n)?,
            };
            let v = weingarten::moment(&req)?;
            scalar(out, cfg, "value", &q(&v), json!({ "request": req }))
        }
        Command::Asymptotic { category: c, k, t } => {
            let c = category(c)?;
            let t = parse_rational(t)?;
            let v = weingarten::asymptotic_moment(&c, *k, &t)?;
            scalar(out, cfg, "value", &q(&v), json!({ "category": c, "k": k, "t": q(&t) }))
        }
        Command::Law { law, k, mc } => {
            let law: Law = law.parse()?;
            let s = laws::law_moments(&law, *k)?;
            if !*mc {
                return series(out, cfg, &s);
            }
            let seed = cfg.require_seed()?;
            let Law::Squeezed(inner) = &law else {
                return Err(easyqg::Error::InvalidParameter("--mc needs a squeezed s_bessel law".into()).into());
            };
            let Law::SBessel(Modulus::Finite(m), t) = inner.as_ref() else {
                return Err(easyqg::Error::InvalidParameter("--mc needs a finite s".into()).into());
            };
            let t64 = t.to_f64().unwrap_or(f64::NAN);
            let est = laws::squeezed_bessel_mc(*m, t64, (*k / 2).max(1), cfg.samples, seed)?;
            match cfg.format {
                Format::Text => {
                    for (j, e) in est.iter().enumerate() {
                        let order = 2 * (j + 1);
                        let exact = s.values.get(order - 1).map_or("-".into(), q);
                        writeln!(out, "{order} {exact} {}", estimate_text(e))?;
                    }
                }
                Format::Csv => {
                    writeln!(out, "k,exact,mean,std_error,samples")?;
                    for (j, e) in est.iter().enumerate() {
                        let order = 2 * (j + 1);
                        let exact = s.values.get(order - 1).map_or(String::new(), q);
                        writeln!(out, "{order},{exact},{:e},{:e},{}", e.mean, e.std_error, e.samples)?;
                    }
                }
                Format::Json => write_json(out, &json!({ "exact": s, "seed": seed, "estimates": est }))?,
            }
            Ok(())
        }
        Command::LawCompare { category: c, law, k, n } => {
            let c = category(c)?;
            let law: Law = law.parse()?;
            let r = laws::law_compare(&c, &law, *k, n)?;
            match cfg.format {
                Format::Json => write_json(out, &r)?,
                _ => write!(out, "{}", r.to_csv())?,
            }
            Ok(())
        }
        Command::Recurrence { k } => series(out, cfg, &laws::balanced_recurrence(*k)?),
        Command::Closure { gens, base, equals, list } => {
            let gens = gens.iter().map(|g| part(g)).collect::<Result<Vec<_>, _>>()?;
            let base = base.as_deref().map(category).transpose()?;
            let equals = equals.as_deref().map(category).transpose()?;
            let g = generate(&gens, base, cfg.max_legs)?;
            let same = equals.map(|c| g.equals_category(&c));
            match cfg.format {
                Format::Json => {
                    let mut v = json!({ "bound": g.bound(), "generators": g.generators(), "base": g.base(), "count": g.len() });
                    if let (Some(c), Some(s)) = (equals, same) {
                        v["equals"] = json!({ "category": c, "equal": s });
                    }
                    if *list {
                        v["members"] = json!(g.table());
                    }
                    write_json(out, &v)?;
                }
                _ => {
                    if *list {
                        partitions(out, cfg, g.members())?;
                    } else {
                        writeln!(out, "members {}", g.len())?;
                        if let (Some(c), Some(s)) = (equals, same) {
                            writeln!(out, "equals {c} {s}")?;
                        }
                    }
                }
            }
            Ok(())
        }
        Command::Axioms { category: c } => {
            let c = category(c)?;
            let r = axioms_hold(&c, cfg.max_legs)?;
            match cfg.format {
                Format::Json => write_json(out, &r)?,
                _ => {
                    writeln!(out, "{c} bound {} members {} passed {}", r.bound, r.member_count, r.passed)?;
                    if let Some(ce) = &r.counterexample {
                        let ins: Vec<String> = ce.inputs.iter().map(partition::format).collect();
                        writeln!(out, "{}: {} -> {}", ce.operation, ins.join(" ; "), partition::format(&ce.output))?;
                    }
                }
            }
            Ok(())
        }
        Command::Verify { lemma, case, category: c, sample, sample_legs, k_max } => {
            let need_case = || case.ok_or_else(|| CliError::Usage(format!("--lemma {lemma} needs --case")));
            let r = match lemma.as_str() {
                "5.2" => {
                    let c = c
                        .as_deref()
                        .ok_or_else(|| CliError::Usage("--lemma 5.2 needs --category".into()))?;
                    classify::verify_lemma_5_2(&category(c)?, cfg.max_legs)?
                }
                "6.2" => classify::verify_lemma_6_2(need_case()?, cfg.max_legs)?,
                "6.3" => {
                    let case = need_case()?;
                    let samples = if sample.is_empty() {
                        classify::lemma_6_3_samples(case)?
                    } else {
                        sample.iter().map(|s| part(s)).collect::<Result<_, _>>()?
                    };
                    classify::verify_lemma_6_3(case, &samples, cfg.max_legs)?
                }
                "6.4" => classify::verify_lemma_6_4(need_case()?, *sample_legs, cfg.max_legs)?,
                "4.3" => classify::verify_prop_4_3(*k_max, cfg.max_legs)?,
                other => {
                    return Err(CliError::Usage(format!(
                        "--lemma: unknown statement '{other}', expected 4.3, 5.2, 6.2, 6.3 or 6.4"
                    )))
                }
            };
            report(out, cfg, &r)
        }
        Command::Sample { group: g, n } => {
            let seed = cfg.require_seed()?;
            let s = tensor::sample(group(g)?, *n, seed)?;
            match cfg.format {
                Format::Json => write_json(out, &s)?,
                Format::Text => element_text(out, s.element())?,
                Format::Csv => {
                    writeln!(out, "row,column,re,im")?;
                    let m = s.matrix();
                    for r in 0..m.nrows() {
                        for c in 0..m.ncols() {
                            let z = m[(r, c)];
                            writeln!(out, "{},{},{:e},{:e}", r + 1, c + 1, z.re, z.im)?;
                        }
                    }
                }
            }
            Ok(())
        }
        Command::FixedDim { group: g, n, k, exact } => {
            let g = group(g)?;
            let ctx = json!({ "group": g, "n": n, "k": k });
            if *exact {
                let v = tensor::exact_fixed_dim(g, *n, *k)?;
                return scalar(out, cfg, "value", &q(&v), ctx);
            }
            let seed = cfg.require_seed()?;
            let e = tensor::mc_fixed_dim(g, *n, *k, cfg.samples, seed, cfg.budget)?;
            match cfg.format {
                Format::Text => writeln!(out, "{}", estimate_text(&e))?,
                Format::Csv => writeln!(out, "mean,std_error,samples\n{:e},{:e},{}", e.mean, e.std_error, e.samples)?,
                Format::Json => {
                    let mut v = ctx;
                    v["seed"] = json!(seed);
                    v["estimate"] = json!(e);
                    write_json(out, &v)?;
                }
            }
            Ok(())
        }
        Command::Operator { partition: p, n, delta, group: g } => {
            let p = part(p)?;
            if let Some(d) = delta {
                let (i, j) = d
                    .split_once(';')
                    .ok_or_else(|| CliError::Usage("--delta expects \"i1,i2;j1,j2\"".into()))?;
                let (i, j) = (indices(i)?, indices(j)?);
                let v = tensor::delta(&p, *n, &i, &j)?;
                let ctx = json!({ "partition": p, "n": n, "i": i, "j": j });
                return scalar(out, cfg, "delta", if v { "1" } else { "0" }, ctx);
            }
            if let Some(g) = g {
                let seed = cfg.require_seed()?;
                let s = tensor::sample(group(g)?, *n, seed)?;
                let r = tensor::intertwines(&p, &s, cfg.budget)?;
                return match cfg.format {
                    Format::Json => write_json(out, &json!({ "partition": p, "sample": s, "result": r })),
                    Format::Text => Ok(writeln!(out, "intertwines {} residual {:e}", r.holds, r.residual)?),
                    Format::Csv => Ok(writeln!(out, "holds,residual\n{},{:e}", r.holds, r.residual)?),
                };
            }
            let op = tensor::build_operator(&p, *n, cfg.budget)?;
            let (k, l) = p.shape();
            let key = |code: usize, len: usize| {
                tensor::decode(*n, code, len).iter().map(usize::to_string).collect::<Vec<_>>().join(",")
            };
            match cfg.format {
                Format::Json => write_json(out, &op)?,
                Format::Text => {
                    writeln!(out, "{}x{} nonzero {}", op.rows(), op.columns(), op.nnz())?;
                    for &(j, i) in op.entries() {
                        writeln!(out, "{} -> {}", key(i, k), key(j, l))?;
                    }
                }
                Format::Csv => {
                    writeln!(out, "source,target")?;
                    for &(j, i) in op.entries() {
                        writeln!(out, "{},{}", csv_field(&key(i, k)), csv_field(&key(j, l)))?;
                    }
                }
            }
            Ok(())
        }
        Command::Partition { op } => partition_op(op, cfg, out),
        Command::Cap { partition: p, capping } => {
            let p = part(p)?;
            let c: Capping = capping.parse()?;
            let r = classify::apply_capping(&p, c)?;
            scalar(out, cfg, "result", &partition::format(&r), json!({ "partition": p, "capping": c.to_string() }))
        }
        Command::Lambda { category: c } => {
            let c = category(c)?;
            let set: BTreeSet<usize> = classify::lambda_set(&c, cfg.max_legs)?;
            match cfg.format {
                Format::Json => write_json(out, &json!({ "category": c, "bound": cfg.max_legs, "lambda": set }))?,
                Format::Text => {
                    let s: Vec<String> = set.iter().map(usize::to_string).collect();
                    writeln!(out, "{}", s.join(" "))?;
                }
                Format::Csv => {
                    writeln!(out, "size")?;
                    for x in &set {
                        writeln!(out, "{x}")?;
                    }
                }
            }
            Ok(())
        }
        Command::Associated { category: c } => {
            let c = category(c)?;
            let a = classify::associated_easy_group(&c, cfg.max_legs)?;
            scalar(out, cfg, "associated", &a.to_string(), json!({ "category": c, "bound": cfg.max_legs }))
        }
    }
}

fn element_text(out: Out, e: &Element) -> Res {
    match e {
        Element::Monomial { perm, phase, order } => {
            let perm: Vec<String> = perm.iter().map(|p| (p + 1).to_string()).collect();
            let phase: Vec<String> = phase.iter().map(u32::to_string).collect();
            writeln!(out, "perm {}", perm.join(" "))?;
            writeln!(out, "phase {} (order {order})", phase.join(" "))?;
        }
        Element::Dense(m) => {
            for r in m.row_iter() {
                let row: Vec<String> = r.iter().map(|x| format!("{x:.12}")).collect();
                writeln!(out, "{}", row.join(" "))?;
            }
        }
    }
    Ok(())
}

fn partition_op(op: &PartitionOp, cfg: &RunConfig, out: Out) -> Res {
    let show = |out: Out, p: &Partition| scalar(out, cfg, "partition", &partition::format(p), json!({}));
    match op {
        PartitionOp::Parse { partition: p } => show(out, &part(p)?),
        PartitionOp::Tensor { left, right } => show(out, &part(left)?.tensor(&part(right)?)),
        PartitionOp::Compose { upper, lower } => {
            let (r, loops) = part(upper)?.compose(&part(lower)?)?;
            match cfg.format {
                Format::Text => writeln!(out, "{}\nloops {loops}", partition::format(&r))?,
                Format::Csv => writeln!(out, "partition,loops\n{},{loops}", csv_field(&partition::format(&r)))?,
                Format::Json => write_json(out, &json!({ "partition": r, "loops": loops }))?,
            }
            Ok(())
        }
        PartitionOp::Involute { partition: p } => show(out, &part(p)?.involute()),
        PartitionOp::Rotate { partition: p, side, row } => {
            let side = match side {
                SideArg::Left => Side::Left,
                SideArg::Right => Side::Right,
            };
            let row = match row {
                RowArg::Top => Row::Upper,
                RowArg::Bottom => Row::Lower,
            };
            show(out, &part(p)?.rotate(side, row)?)
        }
        PartitionOp::Join { left, right } => show(out, &part(left)?.join(&part(right)?)?),
        PartitionOp::Blocks { partition: p } => {
            let p = part(p)?;
            scalar(out, cfg, "blocks", &p.block_count().to_string(), json!({ "partition": p }))
        }
        PartitionOp::Noncrossing { partition: p } => {
            let p = part(p)?;
            scalar(out, cfg, "noncrossing", &p.is_noncrossing().to_string(), json!({ "partition": p }))
        }
        PartitionOp::Subpartitions { partition: p } => {
            let subs: Vec<Partition> = part(p)?.subpartitions().collect();
            partitions(out, cfg, subs.iter())
        }
        PartitionOp::Special { name } => {
            let s: SpecialPartition = name.parse()?;
            show(out, &s.build()?)
        }
    }
}
