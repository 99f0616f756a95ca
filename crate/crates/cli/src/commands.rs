use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use diffcycles::curves::{critical_locus, curve_sweep, verify_identity, CurveSpec};
use diffcycles::dynsys::{collatz_orbit, orbit_report, parity_bijection_check, DynamicalSystem};
use diffcycles::groebner::{buchberger, milnor_number, reduce_mod_p, tame_wild_split, Dimension};
use diffcycles::inertia::{inertia_membership, QuotientModule};
use diffcycles::parse::infer_vars;
use diffcycles::poly::default_var_names;
use diffcycles::{
    AlgebraError, Field, Monomial, MonomialOrder, PolyRing, PrimeField, Rationals, WeylOperator,
};

use crate::{
    BijectionArgs, CliError, CollatzArgs, Command, Context, CurveCountArgs, CurveSweepArgs,
    GroebnerArgs, InertiaArgs, MilnorArgs, OrbitsArgs, Outcome, ProbeArgs, WeylApplyArgs,
};

type CmdResult = Result<Value, CliError>;

fn to_value<T: Serialize + ?Sized>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

pub(crate) fn dispatch(cmd: &Command, ctx: &Context) -> Result<Outcome, CliError> {
    let single = match cmd {
        Command::Milnor(a) => milnor(a, ctx),
        Command::Groebner(a) => match a.p {
            Some(p) => groebner(PrimeField::new(p)?, a, ctx),
            None => groebner(Rationals, a, ctx),
        },
        Command::Inertia(a) => match a.p {
            Some(p) => inertia(PrimeField::new(p)?, a),
            None => inertia(Rationals, a),
        },
        Command::WeylApply(a) => match a.p {
            Some(p) => weyl_apply(PrimeField::new(p)?, a, ctx),
            None => weyl_apply(Rationals, a, ctx),
        },
        Command::Orbits(a) => orbits(a, ctx),
        Command::Collatz(a) => collatz(a),
        Command::CollatzBijection(a) => bijection(a),
        Command::CurveCount(a) => curve_count(a, ctx),
        Command::CurveSweep(a) => return sweep(a, ctx),
        Command::Theorem1Probe(a) => probe(a, ctx),
    };
    single.map(Outcome::Single)
}

/// Highest `d<k>` index in operator text, i.e. the number of variables it needs.
fn operator_arity(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 0;
    for (i, &c) in bytes.iter().enumerate() {
        let boundary = i == 0 || !bytes[i - 1].is_ascii_alphanumeric();
        if c == b'd' && boundary {
            let digits: String = text[i + 1..].chars().take_while(char::is_ascii_digit).collect();
            if let Ok(k) = digits.parse::<usize>() {
                best = best.max(k);
            }
        }
    }
    best
}

/// Variables from `--vars`, else inferred from the inputs; at least `min_vars`.
fn ring_for<F: Field>(field: F, vars: &Option<Vec<String>>, texts: &[&str], min_vars: usize) -> Result<PolyRing<F>, CliError> {
    if let Some(v) = vars {
        if v.is_empty() || v.iter().any(|s| s.trim().is_empty()) {
            return Err(CliError::Usage("--vars needs nonempty names".into()));
        }
        return Ok(PolyRing::new(field, v.iter().map(|s| s.trim().to_string())));
    }
    let inferred = infer_vars(texts.iter().copied());
    let need = min_vars.max(1);
    if inferred.len() >= need {
        return Ok(PolyRing::new(field, inferred));
    }
    let defaults = default_var_names(need);
    if inferred.iter().all(|v| defaults.contains(v)) {
        Ok(PolyRing::new(field, defaults))
    } else {
        Err(CliError::Usage(format!(
            "cannot fit variables {inferred:?} into {need} slots; pass --vars"
        )))
    }
}

fn monomial_string<F: Field>(ring: &PolyRing<F>, m: &Monomial) -> String {
    ring.monomial(m.clone(), ring.field().one()).to_string()
}

fn split_list(text: &str) -> Vec<&str> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn milnor(a: &MilnorArgs, ctx: &Context) -> CmdResult {
    PrimeField::new(a.p)?;
    let ring = ring_for(Rationals, &ctx.vars, &[&a.f], 1)?;
    let f = ring.parse(&a.f)?;
    let report = tame_wild_split(&f, a.p, a.n_max)?;
    let mut v = to_value(&report);
    v["vars"] = to_value(ring.var_names());
    Ok(v)
}

fn groebner<F: Field>(field: F, a: &GroebnerArgs, ctx: &Context) -> CmdResult {
    let gen_texts = split_list(&a.gens);
    if gen_texts.is_empty() {
        return Err(CliError::Usage("--gens needs at least one polynomial".into()));
    }
    let mut all_texts = gen_texts.clone();
    all_texts.extend(a.member.iter().map(String::as_str));
    let ring = ring_for(field, &ctx.vars, &all_texts, 1)?;
    let gens = gen_texts.iter().map(|t| ring.parse(t)).collect::<Result<Vec<_>, _>>()?;
    let order = MonomialOrder::new(a.order, ring.nvars());
    let gb = buchberger(&gens, &order)?;
    let standard = gb.standard_monomials();
    let membership = a
        .member
        .iter()
        .map(|t| {
            let f = ring.parse(t)?;
            let nf = gb.normal_form(&f)?;
            Ok(json!({ "f": f.to_string(), "normal_form": nf.to_string(), "member": nf.is_zero() }))
        })
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    Ok(json!({
        "field": ring.field().name(),
        "vars": ring.var_names(),
        "order": a.order,
        "generators": gens.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "basis": gb.generators().iter().map(ToString::to_string).collect::<Vec<_>>(),
        "leading_monomials": gb.leading_monomials().iter().map(|m| monomial_string(&ring, m)).collect::<Vec<_>>(),
        "reduced": gb.is_reduced(),
        "unit_ideal": gb.is_unit_ideal(),
        "dimension": gb.quotient_dimension(),
        "standard_monomials": standard.as_ref().map(|s| s.iter().take(a.max_standard).map(|m| monomial_string(&ring, m)).collect::<Vec<_>>()),
        "standard_monomials_truncated": standard.as_ref().is_some_and(|s| s.len() > a.max_standard),
        "membership": membership,
    }))
}

fn inertia<F: Field>(field: F, a: &InertiaArgs) -> CmdResult {
    let module = QuotientModule::parse(field, &a.module)?;
    let ring = module.ring().clone();
    let op = WeylOperator::parse(&ring, &a.op)?;
    let element = a.element.as_deref().map(|t| ring.parse(t)).transpose()?;
    let direction = match &a.direction {
        None => 0,
        Some(d) => match ring.var_index(d) {
            Some(i) => i,
            None => d
                .parse::<usize>()
                .ok()
                .filter(|&i| i < ring.nvars())
                .ok_or_else(|| AlgebraError::UnknownVariable(d.clone()))?,
        },
    };
    let report = inertia_membership(&op, a.level, &module, direction, element.as_ref())?;
    Ok(to_value(&report))
}

fn weyl_apply<F: Field>(field: F, a: &WeylApplyArgs, ctx: &Context) -> CmdResult {
    let ring = ring_for(field, &ctx.vars, &[&a.op, &a.f], operator_arity(&a.op))?;
    let op = WeylOperator::parse(&ring, &a.op)?;
    let f = ring.parse(&a.f)?;
    let result = op.apply(&f)?;
    Ok(json!({
        "field": ring.field().name(),
        "vars": ring.var_names(),
        "operator": op,
        "order": op.order(),
        "f": f,
        "result": result,
    }))
}

fn orbits(a: &OrbitsArgs, ctx: &Context) -> CmdResult {
    let field = PrimeField::new(a.p)?;
    let comps = a.system.split(';').collect::<Vec<_>>();
    let ring = ring_for(field, &ctx.vars, &comps, comps.len())?;
    let sys = DynamicalSystem::parse(&ring, &a.system, a.mode)?;
    let report = orbit_report(&sys, a.h, ctx.state_budget, a.max_cycles)?;
    let mut v = to_value(&report);
    v["vars"] = to_value(ring.var_names());
    Ok(v)
}

fn collatz(a: &CollatzArgs) -> CmdResult {
    let start: BigUint = a
        .start
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--start must be a nonnegative integer, got `{}`", a.start)))?;
    Ok(to_value(&collatz_orbit(&start, a.variant, a.budget)))
}

fn bijection(a: &BijectionArgs) -> CmdResult {
    let bijective = parity_bijection_check(a.k)?;
    Ok(json!({
        "k": a.k,
        "variant": "accelerated",
        "residues": 1u64 << a.k,
        "bijective": bijective,
    }))
}

fn curve_count(a: &CurveCountArgs, ctx: &Context) -> CmdResult {
    let spec = CurveSpec::new(a.p, a.a, a.b)?;
    let mut v = to_value(&verify_identity(&spec));
    if a.critical_loci {
        let loci = (0..spec.p)
            .map(|i| critical_locus(&spec.slice_cubic(i), ctx.state_budget))
            .collect::<Result<Vec<_>, _>>()?;
        v["slice_critical_loci"] = to_value(&loci);
    }
    Ok(v)
}

fn sweep(a: &CurveSweepArgs, ctx: &Context) -> Result<Outcome, CliError> {
    if a.pmax < 2 {
        return Err(CliError::Usage("--pmax must be at least 2".into()));
    }
    let (summary, cases) = curve_sweep(a.pmax, a.samples, ctx.seed);
    Ok(Outcome::Sweep {
        summary: to_value(&summary),
        cases: cases.iter().map(to_value).collect(),
        jsonl: a.jsonl.clone(),
    })
}

fn probe(a: &ProbeArgs, ctx: &Context) -> CmdResult {
    let fp = PrimeField::new(a.p)?;
    if a.p == 2 {
        return Err(AlgebraError::RefuseChar2.into());
    }
    let ring = ring_for(Rationals, &ctx.vars, &[&a.f], 1)?;
    let f = ring.parse(&a.f)?;
    // r(t) = t^2 on the one-dimensional target, so r∘f = f^2
    let rf = f.pow(2);
    let mu_rf_q = milnor_number(&rf, a.n_max)?;
    let mu_rf_p = milnor_number(&reduce_mod_p(&rf, fp)?, a.n_max)?;
    let mu_f_q = milnor_number(&f, a.n_max)?;
    let f_p = reduce_mod_p(&f, fp)?;
    let mu_f_p = milnor_number(&f_p, a.n_max)?;
    let gradient = DynamicalSystem::gradient(&f_p)?;
    let orbits = orbit_report(&gradient, a.h, ctx.state_budget, 0)?;
    let locus = critical_locus(&f_p, ctx.state_budget)?;
    let degenerate = [mu_rf_q, mu_rf_p, mu_f_q, mu_f_p]
        .iter()
        .any(|m| m.dimension == Dimension::Infinite);
    Ok(json!({
        "status": "EXPLORATORY",
        "note": "quantities are listed side by side; no equality between them is asserted",
        "f": f,
        "p": a.p,
        "h": a.h,
        "vars": ring.var_names(),
        "r_of_f": rf,
        "milnor_r_of_f_q": mu_rf_q,
        "milnor_r_of_f_fp": mu_rf_p,
        "milnor_f_q": mu_f_q,
        "milnor_f_fp": mu_f_p,
        "degenerate": degenerate,
        "gradient_field": orbits.system,
        "euler_map": orbits.map,
        "states": orbits.states,
        "periodic_count": orbits.periodic_count,
        "cycle_count": orbits.cycle_count,
        "cycle_lengths": orbits.cycle_lengths,
        "critical_locus": locus,
    }))
}
