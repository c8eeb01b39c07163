use serde_json::{json, Value};

use dioph_core::catalogue::{Catalogue, FieldEntry};
use dioph_core::dioph::poly::{bind, scalarize, PolySystem, SystemJson, Witness, WitnessJson};
use dioph_core::dioph::predicates::{emit_nonzero, emit_predicate, PredicateKind};
use dioph_core::dioph::{emit_coset_membership, emit_ok, emit_u};
use dioph_core::ec::{approximate, point_json, EllipticCurveData};
use dioph_core::forcing::{check_hypotheses, compute_n, forcing_conclusion, fuzz, in_base_ring, ForcingInstance, FuzzConfig};
use dioph_core::ideal::{factor, nonzero_witness, num_den, FieldExtension};
use dioph_core::plan::{plan, plan_l0_variant};
use dioph_core::selftest::{self, SelftestConfig, CRITERIA};

use crate::input::{self, bindings, element, extension, ideal, read_json};
use crate::{Cli, CliError, Command, ForcingCommand, IdealArgs, IdealOp};

/// A result in field order as JSON, and as a tree for the text format.
pub struct Rendered {
    pub json: String,
    pub value: Value,
    pub code: u8,
}

type Out = Result<Rendered, CliError>;

fn with_code(v: impl serde::Serialize, code: u8) -> Out {
    let json = serde_json::to_string_pretty(&v).expect("serializable");
    Ok(Rendered { json, value: serde_json::to_value(v).expect("serializable"), code })
}

fn ok(v: impl serde::Serialize) -> Out {
    with_code(v, 0)
}

pub fn run(cli: &Cli) -> Out {
    let cat = input::catalogue(cli.catalogue.as_deref())?;
    match &cli.command {
        Command::Field(a) => match &a.field {
            None => ok(json!({ "fields": cat.field_names(), "curves": cat.curve_names() })),
            Some(name) => {
                let f = cat.field(name)?;
                let e = FieldEntry::from_field(&f);
                let (r1, r2) = f.signature();
                ok(json!({
                    "name": e.name,
                    "degree": f.degree(),
                    "defining_poly": e.defining_poly,
                    "integral_basis": e.integral_basis,
                    "discriminant": f.discriminant().to_string(),
                    "poly_discriminant": f.poly_discriminant().to_string(),
                    "index": f.index().to_string(),
                    "signature": [r1, r2],
                    "totally_real": f.is_totally_real(),
                }))
            }
        },
        Command::Ideal(a) => ideal_cmd(&cat, a),
        Command::Nonzero(a) => {
            let f = cat.field(&a.field)?;
            let av = element(&f, &a.a)?;
            let (x, y) = nonzero_witness(&av)?;
            let sys = emit_nonzero(&FieldExtension::trivial(&f));
            let mut w = Witness::new();
            w.set("a", av).set("x", x).set("y", y);
            let verified = sys.verify(&w)?;
            ok(json!({ "field": f.name(), "assignment": w.to_json().assignment, "verified": verified }))
        }
        Command::Forcing { command } => forcing_cmd(&cat, command),
        Command::Approx(a) => {
            let data = EllipticCurveData::from_entry(&cat, cat.curve(&a.curve)?)?;
            let m = ideal(data.field(), &a.modulus)?;
            let ap = approximate(&data, a.k, &m, cli.digit_budget)?;
            let (n, d) = num_den(&ap.s)?;
            ok(json!({
                "curve": data.name,
                "k": a.k,
                "modulus": m.to_json(),
                "s": ap.s.ib_strings(),
                "numerator": n.to_json(),
                "denominator": d.to_json(),
                "point": point_json(&ap.r),
                "certificate": ap.certificate,
            }))
        }
        Command::Emit(a) => {
            let sys = if a.predicate == "coset" {
                let data = EllipticCurveData::from_entry(&cat, cat.curve(&a.curve)?)?;
                let base = a.base.clone().unwrap_or_else(|| data.field().name().to_string());
                let ext = extension(&cat, &a.field, Some(&base), a.embedding.as_deref(), false)?;
                let reps: Vec<_> = a.reps.iter().map(|&m| data.curve.mul_i64(m, &data.generator)).collect();
                emit_coset_membership(&data, &ext, &reps, a.r)?.system
            } else {
                let ext = extension(&cat, &a.field, a.base.as_deref(), a.embedding.as_deref(), true)?;
                match a.predicate.as_str() {
                    "nonzero" => emit_nonzero(&ext),
                    "u" => emit_u(&ext)?.system,
                    "ok" => emit_ok(&ext)?.system,
                    k => emit_predicate(k.parse::<PredicateKind>().map_err(|_| unknown_predicate(k))?, &ext),
                }
            };
            let sys = if a.bind.is_empty() { sys } else { bind(&sys, &bindings(sys.ext.top(), &a.bind)?)? };
            ok(sys.to_json())
        }
        Command::Verify(a) => {
            let sys = PolySystem::from_json(&read_json::<SystemJson>(&a.system)?, &cat)?;
            let w = Witness::from_json(&read_json::<WitnessJson>(&a.witness)?, sys.ext.top())?;
            ok(json!({ "satisfied": sys.verify(&w)? }))
        }
        Command::Scalarize(a) => {
            let sys = PolySystem::from_json(&read_json::<SystemJson>(&a.system)?, &cat)?;
            let sc = scalarize(&sys)?;
            match &a.witness {
                None => ok(sc.to_json()),
                Some(p) => {
                    let w = Witness::from_json(&read_json::<WitnessJson>(p)?, sys.ext.top())?;
                    let xs = sc.map_witness(&w)?;
                    let back = sc.unmap_witness(sys.ext.top(), &xs)?;
                    ok(json!({
                        "system": sc.to_json(),
                        "assignment": xs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "satisfied": sc.verify(&xs),
                        "round_trip": sc.source_variables.iter().all(|v| back.get(v) == w.get(v)),
                    }))
                }
            }
        }
        Command::Plan(a) => {
            let f = cat.field(&a.field)?;
            let p = if a.l0_variant { plan_l0_variant(&f, Some(&cat))? } else { plan(&f, Some(&cat))? };
            ok(p)
        }
        Command::Selftest(a) => {
            let ids: Vec<u32> = if a.criteria.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { a.criteria.clone() };
            if let Some(bad) = ids.iter().find(|i| !CRITERIA.iter().any(|c| c.0 == **i)) {
                return Err(CliError::Usage(format!("no criterion {bad}")));
            }
            let rep = selftest::run(&SelftestConfig { seed: a.seed, quick: a.quick }, &ids);
            let code = if rep.passed { 0 } else { 1 };
            with_code(rep, code)
        }
    }
}

fn unknown_predicate(k: &str) -> CliError {
    let kinds: Vec<&str> = PredicateKind::ALL.iter().map(|k| k.name()).chain(["nonzero", "u", "ok", "coset"]).collect();
    CliError::Usage(format!("unknown predicate `{k}`; expected one of {}", kinds.join(", ")))
}

fn need<'a>(s: &'a Option<String>, flag: &str) -> Result<&'a str, CliError> {
    s.as_deref().ok_or_else(|| CliError::Usage(format!("this --op needs --{flag}")))
}

fn ideal_cmd(cat: &Catalogue, a: &IdealArgs) -> Out {
    let f = cat.field(&a.field)?;
    if a.op == IdealOp::NumDen {
        let x = element(&f, need(&a.element, "element")?)?;
        let (n, d) = num_den(&x)?;
        return ok(json!({ "element": x.ib_strings(), "num": n.to_json(), "den": d.to_json() }));
    }
    let i = ideal(&f, need(&a.a, "a")?)?;
    let second = || -> Result<_, CliError> { ideal(&f, need(&a.b, "b")?) };
    let shown = |j: &dioph_core::ideal::Ideal| json!({ "ideal": j.to_json(), "norm": j.norm().to_string() });
    match a.op {
        IdealOp::Show => ok(shown(&i)),
        IdealOp::Mul => ok(shown(&i.mul(&second()?)?)),
        IdealOp::Sum => ok(shown(&i.sum(&second()?)?)),
        IdealOp::Intersect => ok(shown(&i.intersect(&second()?)?)),
        IdealOp::Divides => ok(json!({ "divides": i.divides(&second()?)? })),
        IdealOp::Coprime => ok(json!({ "coprime": i.coprime(&second()?)? })),
        IdealOp::TwoElement => {
            let (g1, g2) = i.two_element_rep();
            ok(json!({ "ideal": i.to_json(), "generators": [g1.ib_strings(), g2.ib_strings()] }))
        }
        IdealOp::Factor => {
            let fac = factor(&i)?;
            let primes: Vec<Value> = fac
                .factors
                .iter()
                .map(|(p, e)| json!({ "p": p.p, "e": p.e, "f": p.f, "exponent": e, "ideal": p.ideal.to_json() }))
                .collect();
            ok(json!({ "ideal": i.to_json(), "factors": primes }))
        }
        IdealOp::NumDen => unreachable!(),
    }
}

fn forcing_cmd(cat: &Catalogue, c: &ForcingCommand) -> Out {
    match c {
        ForcingCommand::N { ell } => ok(compute_n(*ell)?),
        ForcingCommand::Check(a) => {
            let t = &a.tower;
            let ext = extension(cat, &t.field, t.base.as_deref(), t.embedding.as_deref(), false)?;
            let params = compute_n(ext.top().degree() as u32)?;
            let alpha = element(ext.top(), &a.alpha)?;
            let m = ideal(ext.base(), &a.ideal)?;
            let k = element(ext.base(), &a.k)?;
            let inst = ForcingInstance::new(ext.clone(), alpha.clone(), m.clone(), k.clone(), params)?;
            ok(json!({
                "field": ext.top().name(),
                "base": ext.base().name(),
                "params": params,
                "alpha": alpha.ib_strings(),
                "ideal": m.to_json(),
                "k": k.ib_strings(),
                "hypotheses": check_hypotheses(&inst)?,
                "alpha_in_base": in_base_ring(&ext, &alpha),
                "verdict": forcing_conclusion(&inst)?,
            }))
        }
        ForcingCommand::Fuzz(a) => {
            let t = &a.tower;
            let ext = extension(cat, &t.field, t.base.as_deref(), t.embedding.as_deref(), false)?;
            let cfg = FuzzConfig {
                trials: a.trials,
                height_bound: a.height_bound,
                norm_bound: a.norm_bound,
                seed: a.seed,
                ..FuzzConfig::default()
            };
            if a.height_bound <= 0 || a.norm_bound == 0 {
                return Err(CliError::Usage("--height-bound and --norm-bound must be positive".into()));
            }
            ok(fuzz(&ext, &cfg)?)
        }
    }
}
