use std::collections::HashMap;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use planeaut::actions::{normal_form, normal_form_for_class, types_conjugate, DiagAction};
use planeaut::covers::{fixed_data, ramification_profile};
use planeaut::parse::{parse_constant, parse_form};
use planeaut::smoothness::{finite_field_check, is_smooth};
use planeaut::specialgroups::{
    hessian, in_gamma, invariant_forms, lambda_choices, upsilon, HessianSubgroup,
};
use planeaut::stabilizer::aut_lower_bound;
use planeaut::verify::{verify, Scope};
use planeaut::{Cyc, Execution, Monomial, TernaryForm};

const ENV_HELP: &str = "Environment:\n  \
    PLANEAUT_MAX_PRIME     largest prime accepted by finite-field checks\n  \
    PLANEAUT_BRANCH_LIMIT  branch cap for block reduction";

#[derive(Parser)]
#[command(name = "planeaut", version, about = "Automorphism data for smooth plane curves", after_help = ENV_HELP)]
struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormArgs {
    /// Homogeneous form, e.g. "X^5 + Y^5 + Z^4*X + b*X^3*Y^2".
    form: String,
    /// Parameter assignment `name=value`; repeatable.
    #[arg(long = "set", value_name = "NAME=VALUE")]
    set: Vec<String>,
}

impl FormArgs {
    fn load(&self) -> Result<(TernaryForm, HashMap<String, Cyc>)> {
        let f = parse_form(&self.form).with_context(|| format!("parsing {:?}", self.form))?;
        let mut values = HashMap::new();
        for s in &self.set {
            let (name, value) = s
                .split_once('=')
                .ok_or_else(|| anyhow!("--set expects name=value, got {s:?}"))?;
            let c = parse_constant(value).with_context(|| format!("value of {name}"))?;
            values.insert(name.trim().to_string(), c);
        }
        Ok((f, values))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normal form of a weight class under a diagonal action.
    NormalForm {
        #[arg(long = "type", value_name = "M,A,B")]
        kind: DiagAction,
        #[arg(long, short)]
        degree: u32,
        /// Reference monomials separated by commas, e.g. "X^5,Y^5".
        #[arg(long, conflicts_with = "class")]
        reference: Option<String>,
        /// Weight class; the first class monomial becomes the reference.
        #[arg(long)]
        class: Option<u32>,
    },
    /// Diagonal, monomial and block stabilizer data.
    Stabilizer(FormArgs),
    /// Exact smoothness, or a finite-field check with --prime.
    SmoothCheck {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Ramification profile of the quotient by a diagonal action.
    Ramification {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long = "type", value_name = "M,A,B")]
        kind: DiagAction,
    },
    /// Hessian group closure and, with --degree, its invariant forms.
    Hessian {
        #[arg(long, default_value_t = 216)]
        subgroup: u32,
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Upsilon values and membership for (b1, b2, b3).
    Gamma {
        #[arg(long)]
        b1: String,
        #[arg(long)]
        b2: String,
        #[arg(long)]
        b3: String,
        /// Cube root of omega as zeta(9)^(1+3t); all three when omitted.
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..3))]
        lambda: Option<u32>,
    },
    /// Whether two cyclic diagonal groups are conjugate.
    TypesConjugate {
        #[arg(long = "type", value_name = "M,A,B", num_args = 1, required = true)]
        kinds: Vec<DiagAction>,
    },
    /// Recompute the reference data and report pass/fail per item.
    VerifyPaper {
        #[arg(long, default_value = "all", value_parser = Scope::NAMES)]
        scope: String,
    },
}

fn monomials(list: &str) -> Result<Vec<Monomial>> {
    list.split(',')
        .map(|s| {
            let f = parse_form(s.trim())?;
            match f.support().as_slice() {
                [m] => Ok(*m),
                _ => bail!("{s:?} is not a single monomial"),
            }
        })
        .collect()
}

fn emit(json_mode: bool, value: &Value, text: impl FnOnce() -> String) {
    if json_mode {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("serializable")
        );
    } else {
        println!("{}", text());
    }
}

fn run(cli: Cli) -> Result<bool> {
    let js = cli.json;
    match cli.command {
        Command::NormalForm {
            kind,
            degree,
            reference,
            class,
        } => {
            let nf = match (reference, class) {
                (Some(r), _) => normal_form(degree, &kind, &monomials(&r)?),
                (None, Some(w)) => normal_form_for_class(degree, &kind, w),
                (None, None) => bail!("give --reference or --class"),
            };
            let nf = match nf {
                Ok(nf) => nf,
                Err(e) => {
                    let v = json!({ "type": kind.to_string(), "degree": degree, "degenerate": e.to_string() });
                    emit(js, &v, || format!("type {kind}, degree {degree}: {e}"));
                    return Ok(true);
                }
            };
            let params: Vec<Value> = nf
                .params
                .iter()
                .map(|(n, m)| json!({ "name": n, "monomial": m.to_string() }))
                .collect();
            let v = json!({
                "type": kind.to_string(),
                "degree": degree,
                "weight_class": nf.weight_class,
                "form": nf.base.to_string(),
                "parameters": params,
                "homology": kind.is_homology(),
            });
            emit(js, &v, || {
                format!(
                    "type {kind}, degree {degree}, class {}\n{}\nparameters: {}",
                    nf.weight_class,
                    nf.base,
                    nf.params
                        .iter()
                        .map(|(n, _)| n.as_str())
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            });
        }
        Command::Stabilizer(args) => {
            let (f, values) = args.load()?;
            let f = f.specialize(&values);
            let r = aut_lower_bound(&f)?;
            emit(js, &serde_json::to_value(&r)?, || {
                let order = |o: Option<u64>| o.map_or("infinite".to_string(), |n| n.to_string());
                let mut s = format!(
                    "diagonal order: {}\nmonomial order: {}\n",
                    order(r.diagonal.order),
                    order(r.monomial.as_ref().and_then(|m| m.order))
                );
                for (shape, out) in &r.blocks {
                    s += &format!(
                        "block {shape}: {}\n",
                        if out.certified() {
                            "reduces to diagonal"
                        } else {
                            "inconclusive"
                        }
                    );
                }
                s += &format!("total: {} ({:?})", order(r.total_order), r.completeness);
                for n in &r.notes {
                    s += &format!("\nnote: {n}");
                }
                s
            });
        }
        Command::SmoothCheck { form, prime } => {
            let (f, values) = form.load()?;
            match prime {
                None => {
                    let c = is_smooth(&f, &values)?;
                    emit(js, &serde_json::to_value(&c)?, || {
                        format!("{:?} by {:?}; witness {:?}", c.verdict, c.method, c.witness)
                    });
                }
                Some(p) => {
                    let c = finite_field_check(&f, &values, p)?;
                    emit(js, &serde_json::to_value(&c)?, || {
                        let mut s = format!(
                            "{:?} mod {p}; {} points; Weil bound {}",
                            c.certificate.verdict,
                            c.point_count,
                            if c.within_weil_bound {
                                "holds"
                            } else {
                                "fails"
                            }
                        );
                        for w in &c.warnings {
                            s += &format!("\nwarning: {w}");
                        }
                        s
                    });
                }
            }
        }
        Command::Ramification { form, kind } => {
            let (f, values) = form.load()?;
            let p = ramification_profile(&f, &values, &kind)?;
            let v = json!({ "fixed": fixed_data(&kind), "profile": p });
            emit(js, &v, || {
                let e: Vec<String> = p
                    .entries
                    .iter()
                    .map(|(e, c)| format!("{c} points of index {e}"))
                    .collect();
                format!(
                    "{}\nquotient genus {} (curve genus {})",
                    e.join("\n"),
                    p.quotient_genus,
                    p.curve_genus
                )
            });
        }
        Command::Hessian { subgroup, degree } => {
            let sub = HessianSubgroup::from_order(subgroup)
                .ok_or_else(|| anyhow!("subgroup must be 36, 72 or 216"))?;
            let g = hessian(sub);
            let spaces = match degree {
                Some(d) => Some(invariant_forms(
                    &g.generators
                        .iter()
                        .map(|(_, m)| m.clone())
                        .collect::<Vec<_>>(),
                    d,
                    Execution::Auto,
                )?),
                None => None,
            };
            let v = json!({
                "order": g.order,
                "generators": g.generators.iter().map(|(n, _)| n).collect::<Vec<_>>(),
                "element_orders": g.element_orders,
                "invariant_forms": spaces,
            });
            emit(js, &v, || {
                let mut s = format!("order {}\nelement orders {:?}", g.order, g.element_orders);
                for sp in spaces.iter().flatten() {
                    let chars: Vec<String> = sp.characters.iter().map(|c| c.to_string()).collect();
                    s += &format!(
                        "\ncharacter ({}): {} forms",
                        chars.join(", "),
                        sp.basis.len()
                    );
                    for f in &sp.basis {
                        s += &format!("\n  {f}");
                    }
                }
                s
            });
        }
        Command::Gamma { b1, b2, b3, lambda } => {
            let b = [
                parse_constant(&b1)?,
                parse_constant(&b2)?,
                parse_constant(&b3)?,
            ];
            let br = [&b[0], &b[1], &b[2]];
            let choices: Vec<(usize, Cyc)> = lambda_choices()
                .into_iter()
                .enumerate()
                .filter(|(t, _)| lambda.is_none_or(|l| l as usize == *t))
                .collect();
            let mut rows = Vec::new();
            for (t, l) in &choices {
                let vals = upsilon(br, l)?;
                rows.push(json!({
                    "choice": t,
                    "lambda": l,
                    "values": vals,
                    "in_gamma": in_gamma(br, &vals),
                }));
            }
            let union = rows.iter().any(|r| r["in_gamma"] == json!(true));
            let v = json!({ "b": b, "choices": rows, "in_gamma_any": union,
                "note": "the cube root of omega is not fixed; membership is reported per choice and as the union" });
            emit(js, &v, || {
                let mut s = String::new();
                for r in &rows {
                    s += &format!(
                        "lambda' = {}: upsilon = {}, member: {}\n",
                        r["lambda"], r["values"], r["in_gamma"]
                    );
                }
                s + &format!("member for some choice: {union}")
            });
        }
        Command::TypesConjugate { kinds } => {
            let [a, b] = kinds.as_slice() else {
                bail!("give --type exactly twice");
            };
            let c = types_conjugate(a, b);
            emit(js, &serde_json::to_value(&c)?, || {
                format!(
                    "{a} and {b}: {}\n{:?}",
                    if c.conjugate {
                        "conjugate"
                    } else {
                        "not conjugate"
                    },
                    c.certificate
                )
            });
        }
        Command::VerifyPaper { scope } => {
            let scope: Scope = scope.parse().map_err(|e: String| anyhow!(e))?;
            let r = verify(scope, Execution::Auto);
            emit(js, &serde_json::to_value(&r)?, || {
                let mut s = String::new();
                for i in &r.items {
                    s += &format!("{} {}", if i.pass { "PASS" } else { "FAIL" }, i.id);
                    if !i.pass {
                        s += &format!(
                            "\n     expected {}\n     computed {}",
                            i.expected, i.computed
                        );
                    }
                    s += "\n";
                    for n in i.notes.iter().filter(|n| n.level == "WARN") {
                        s += &format!("     {}: {}\n", n.level, n.text);
                    }
                }
                s + &format!("{} passed, {} failed", r.passed, r.failed)
            });
            return Ok(r.ok());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
