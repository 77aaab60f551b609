use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use bist_core::correspondence::{
    box_form, diamond_form, find_row, fmp_guaranteed, resolve_spec, table_registry,
    verify_correspondence, InclusionSpec,
};
use bist_core::filtration::{
    converse_lifting_violation, finest_filtration, transitive_filtration,
    verify_filtration_conditions, verify_truth_preservation,
};
use bist_core::formula::desugar;
use bist_core::hilbert::{
    check_certificate, check_derivation_in, derivation_from_json, soundness_sweep, ProofContext,
    ProofFile,
};
use bist_core::kripke::{model_to_file, read_model_file};
use bist_core::morphisms::{check_bounded_morphism, find_truth_violation, StateMap};
use bist_core::morphology::{
    check_strict, closing, dilate, erode, grid_model, opening, Hypergraph,
};
use bist_core::search::{find_countermodel, SearchVerdict, MAX_FRAME_SIZE};
use bist_core::semantics::{satisfies, truth_set, Counterexample, Valuation};
use bist_core::{parse, Formula, FormulaSet, HModel, StateSet};

use crate::report::{Outcome, Verdict};

fn read_model(path: &Path) -> Result<HModel> {
    read_model_file(path).with_context(|| format!("reading model {}", path.display()))
}

fn formula(text: &str) -> Result<Formula> {
    parse(text).with_context(|| format!("parsing formula `{text}`"))
}

/// Non-empty lines that do not start with `#`.
fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_json(path: &Path, value: &impl serde::Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn labels(m: &HModel, set: &StateSet) -> Vec<String> {
    set.iter().map(|u| m.label(u).to_string()).collect()
}

fn show(items: &[String]) -> String {
    format!("{{{}}}", items.join(", "))
}

fn valuation_labels(m: &HModel, val: &Valuation) -> BTreeMap<String, Vec<String>> {
    val.iter().map(|(a, s)| (a.clone(), labels(m, s))).collect()
}

fn counterexample_json(m: &HModel, c: &Counterexample) -> Value {
    json!({
        "state": m.label(c.state),
        "valuation": valuation_labels(m, &c.valuation),
    })
}

fn state_set(m: &HModel, text: &str) -> Result<StateSet> {
    let names: Vec<&str> = text
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    Ok(m.states_of(&names)?)
}

pub fn check(
    model: &Path,
    formula_text: Option<&str>,
    formula_file: Option<&Path>,
    state: Option<&str>,
) -> Result<Outcome> {
    let m = read_model(model)?;
    let formulas = match (formula_text, formula_file) {
        (Some(t), _) => vec![formula(t)?],
        (None, Some(path)) => {
            let text = read_text(path)?;
            content_lines(&text).map(formula).collect::<Result<Vec<_>>>()?
        }
        (None, None) => bail!("give a formula or --formula-file"),
    };
    if formulas.is_empty() {
        bail!("no formulas to check");
    }
    let state = state
        .map(|s| m.state(s).ok_or_else(|| anyhow!("unknown state label `{s}`")))
        .transpose()?;

    let mut all = true;
    let mut entries = vec![];
    let mut text = String::new();
    for f in &formulas {
        let truth = truth_set(&m, f);
        let valid = truth.is_full();
        let mut entry = json!({
            "formula": f.to_string(),
            "truth_set": labels(&m, &truth),
            "valid": valid,
        });
        writeln!(text, "[[{f}]] = {}", show(&labels(&m, &truth)))?;
        match state {
            Some(u) => {
                let holds = satisfies(&m, u, f)?;
                all &= holds;
                entry["state"] = json!(m.label(u));
                entry["holds"] = json!(holds);
                writeln!(text, "{f} at {}: {holds}", m.label(u))?;
            }
            None => {
                all &= valid;
                writeln!(text, "{f}: {}", if valid { "valid" } else { "not valid" })?;
            }
        }
        entries.push(entry);
    }
    Ok(Outcome {
        verdict: Verdict::from_bool(all),
        result: json!({ "formulas": entries }),
        text,
    })
}

pub fn frame(model: &Path, spec_text: &str) -> Result<Outcome> {
    let m = read_model(model)?;
    let spec = resolve_spec(spec_text)?;
    let row = find_row(spec_text).ok().map(|r| r.name);
    let rep = verify_correspondence(m.frame(), &spec);
    let (dia, boxed) = (diamond_form(&spec), box_form(&spec));
    let agree = rep.agree();
    let result = json!({
        "spec": spec.to_string(),
        "row": row,
        "inclusion": rep.inclusion,
        "diamond_form": dia.to_string(),
        "diamond_valid": rep.diamond.is_valid(),
        "box_form": boxed.to_string(),
        "box_valid": rep.boxed.is_valid(),
        "forms_agree": agree,
        "counterexample": rep.counterexample().map(|c| counterexample_json(&m, c)),
    });
    let mut text = String::new();
    if let Some(name) = row {
        writeln!(text, "{name}: {spec}")?;
    }
    writeln!(text, "inclusion {spec}: {}", rep.inclusion)?;
    writeln!(text, "{dia}: {}", if rep.diamond.is_valid() { "valid" } else { "not valid" })?;
    writeln!(text, "{boxed}: {}", if rep.boxed.is_valid() { "valid" } else { "not valid" })?;
    if let Some(c) = rep.counterexample() {
        let val = valuation_labels(&m, &c.valuation);
        writeln!(text, "fails at {} under {val:?}", m.label(c.state))?;
    }
    if !agree {
        writeln!(text, "inclusion and modal forms disagree")?;
    }
    let verdict = if agree {
        Verdict::from_bool(rep.inclusion)
    } else {
        Verdict::InternalFailure
    };
    Ok(Outcome {
        verdict,
        result,
        text,
    })
}

fn check_bound(bound: usize) -> Result<()> {
    if bound == 0 || bound > MAX_FRAME_SIZE {
        bail!("bound must be between 1 and {MAX_FRAME_SIZE}");
    }
    Ok(())
}

pub fn prove(file: &Path, sweep: Option<usize>) -> Result<Outcome> {
    let text = read_text(file)?;
    let (kind, d, ctx, target, report) = match ProofFile::from_json(&text)? {
        ProofFile::Derivation(_) => {
            let d = derivation_from_json(&text)?;
            let ctx = ProofContext::default();
            let report = check_derivation_in(&d, &ctx);
            ("derivation", d, ctx, None, report)
        }
        ProofFile::Certificate(c) => {
            let c = c.to_certificate()?;
            let report = check_certificate(&c);
            ("certificate", c.derivation.clone(), c.context(), Some(c.target()), report)
        }
    };
    let accepted = report.accepted();
    let mut text = String::new();
    for v in &report.violations {
        writeln!(text, "{v}")?;
    }
    if let Some(t) = &target {
        writeln!(text, "target: {t}")?;
    }
    writeln!(
        text,
        "{kind} with {} lines: {}",
        report.lines,
        if accepted { "accepted" } else { "rejected" }
    )?;
    let mut verdict = Verdict::from_bool(accepted);
    let mut sweep_json = Value::Null;
    if let Some(bound) = sweep {
        check_bound(bound)?;
        if accepted {
            let rep = soundness_sweep(&d, bound, &ctx)?;
            writeln!(
                text,
                "validity on {} frames up to size {bound}: {}",
                rep.frames_checked,
                if rep.passed() { "every line valid" } else { "FAILED" }
            )?;
            if !rep.passed() {
                verdict = Verdict::InternalFailure;
            }
            sweep_json = serde_json::to_value(&rep)?;
        }
    }
    Ok(Outcome {
        verdict,
        result: json!({
            "kind": kind,
            "accepted": accepted,
            "lines": report.lines,
            "conclusion": report.conclusion,
            "target": target.map(|t| t.to_string()),
            "violations": report.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "sweep": sweep_json,
        }),
        text,
    })
}

fn read_sigma(arg: &str) -> Result<Vec<InclusionSpec>> {
    let path = Path::new(arg);
    let items: Vec<String> = if path.is_file() {
        content_lines(&read_text(path)?).map(String::from).collect()
    } else {
        arg.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect()
    };
    items
        .iter()
        .map(|s| resolve_spec(s).map_err(Into::into))
        .collect()
}

const CAVEAT: &str = "no countermodel up to the bound; this is not a validity proof";

pub fn search(
    formula_text: &str,
    bound: usize,
    sigma: Option<&str>,
    emit_model: Option<&Path>,
) -> Result<Outcome> {
    let f = formula(formula_text)?;
    check_bound(bound)?;
    let specs = sigma.map(read_sigma).transpose()?.unwrap_or_default();
    let fmp = fmp_guaranteed(&specs);
    let sigma_text: Vec<String> = specs.iter().map(|s| s.to_string()).collect();
    let mut text = String::new();
    let (verdict, result) = match find_countermodel(&f, bound, &specs) {
        SearchVerdict::CountermodelFound {
            model,
            state,
            frames_checked,
        } => {
            let file = model_to_file(&model);
            if let Some(path) = emit_model {
                write_json(path, &file)?;
            }
            writeln!(
                text,
                "countermodel: {f} fails at state {} of a {}-state model ({frames_checked} frames checked)",
                model.label(state),
                model.size()
            )?;
            writeln!(text, "{}", serde_json::to_string_pretty(&file)?)?;
            let result = json!({
                "formula": f.to_string(),
                "bound": bound,
                "sigma": sigma_text,
                "refuted": true,
                "state": model.label(state),
                "model": file,
                "frames_checked": frames_checked,
            });
            (Verdict::Negative, result)
        }
        SearchVerdict::NoCountermodelUpToBound {
            bound,
            frames_checked,
        } => {
            writeln!(text, "{f}: {CAVEAT} (frames of size <= {bound}, {frames_checked} checked)")?;
            if !fmp {
                writeln!(text, "the frame conditions lie outside the classes with a proved finite model property")?;
            }
            let result = json!({
                "formula": f.to_string(),
                "bound": bound,
                "sigma": sigma_text,
                "refuted": false,
                "frames_checked": frames_checked,
                "caveat": CAVEAT,
                "fmp_guaranteed": fmp,
            });
            (Verdict::Positive, result)
        }
    };
    Ok(Outcome {
        verdict,
        result,
        text,
    })
}

pub fn filtrate(model: &Path, formulas: &[String], transitive: bool, out: Option<&Path>) -> Result<Outcome> {
    let m = read_model(model)?;
    let delta: FormulaSet = formulas
        .iter()
        .map(|t| formula(t).map(|f| desugar(&f)))
        .collect::<Result<FormulaSet>>()?
        .closure();
    let filt = if transitive {
        transitive_filtration(&m, &delta)?
    } else {
        finest_filtration(&m, &delta)?
    };
    let conditions = verify_filtration_conditions(&m, &delta, &filt);
    let truth = if conditions.all_pass() {
        Some(verify_truth_preservation(&m, &delta, &filt)?)
    } else {
        None
    };
    let lifting = converse_lifting_violation(&m, &filt)
        .map(|(x, y)| vec![m.label(x).to_string(), m.label(y).to_string()]);
    let ok = conditions.all_pass() && truth.as_ref().is_some_and(|t| t.preserved()) && lifting.is_none();
    let file = model_to_file(&filt.model);
    if let Some(path) = out {
        write_json(path, &file)?;
    }
    let classes = filt.classes_map(&m);

    let mut text = String::new();
    let delta_text: Vec<String> = delta.iter().map(|f| f.to_string()).collect();
    writeln!(text, "delta: {}", show(&delta_text))?;
    writeln!(text, "{} classes from {} states", filt.model.size(), m.size())?;
    for (label, members) in &classes {
        writeln!(text, "  [{label}] = {}", show(members))?;
    }
    let failed = conditions.failed();
    if failed.is_empty() {
        writeln!(text, "conditions 1-7: pass")?;
    } else {
        writeln!(text, "conditions failing: {failed:?}")?;
    }
    if let Some(t) = &truth {
        writeln!(
            text,
            "truth preservation: {} ({} pairs)",
            if t.preserved() { "holds" } else { "FAILS" },
            t.pairs_checked
        )?;
    }
    writeln!(text, "left converse lifting: {}", if lifting.is_none() { "holds" } else { "FAILS" })?;
    if out.is_none() {
        writeln!(text, "{}", serde_json::to_string_pretty(&file)?)?;
    }
    Ok(Outcome {
        verdict: if ok { Verdict::Positive } else { Verdict::InternalFailure },
        result: json!({
            "delta": delta_text,
            "variant": filt.variant,
            "classes": classes,
            "model": file,
            "conditions": conditions.conditions,
            "truth_preservation": truth,
            "converse_lifting_violation": lifting,
        }),
        text,
    })
}

#[derive(Debug, Clone, Copy)]
pub enum MorphKind {
    Dilate,
    Erode,
    Open,
    Close,
}

impl MorphKind {
    fn name(self) -> &'static str {
        match self {
            MorphKind::Dilate => "dilation",
            MorphKind::Erode => "erosion",
            MorphKind::Open => "opening",
            MorphKind::Close => "closing",
        }
    }

    /// The modal formula over `atom` with the same extent.
    fn modal(self, atom: &str) -> Formula {
        let p = Formula::atom(atom);
        match self {
            MorphKind::Dilate => Formula::bdia(p),
            MorphKind::Erode => Formula::wbox(p),
            MorphKind::Open => Formula::bdia(Formula::wbox(p)),
            MorphKind::Close => Formula::wbox(Formula::bdia(p)),
        }
    }
}

pub fn morph(kind: MorphKind, model: &Path, set: Option<&str>, atom: Option<&str>, strict: bool) -> Result<Outcome> {
    let m = read_model(model)?;
    let x = match (set, atom) {
        (Some(s), _) => state_set(&m, s)?,
        (None, Some(a)) => m
            .valuation()
            .get(a)
            .cloned()
            .ok_or_else(|| anyhow!("atom `{a}` has no valuation in the model"))?,
        (None, None) => bail!("give --set or --atom"),
    };
    let r = m.r();
    if strict {
        let g = Hypergraph::new(m.h().clone())?;
        check_strict(&g, &x, r)?;
    }
    let y = match kind {
        MorphKind::Dilate => dilate(&x, r)?,
        MorphKind::Erode => erode(r, &x)?,
        MorphKind::Open => opening(&x, r)?,
        MorphKind::Close => closing(&x, r)?,
    };
    let mut text = format!("{}: {} -> {}\n", kind.name(), show(&labels(&m, &x)), show(&labels(&m, &y)));
    let mut result = json!({
        "operation": kind.name(),
        "input": labels(&m, &x),
        "output": labels(&m, &y),
    });
    let mut verdict = Verdict::Positive;
    if let Some(a) = atom.filter(|_| set.is_none()) {
        let f = kind.modal(a);
        let agrees = truth_set(&m, &f) == y;
        writeln!(text, "[[{f}]] {} the {}", if agrees { "equals" } else { "DIFFERS FROM" }, kind.name())?;
        result["modal_formula"] = json!(f.to_string());
        result["modal_agrees"] = json!(agrees);
        if !agrees {
            verdict = Verdict::InternalFailure;
        }
    }
    Ok(Outcome { verdict, result, text })
}

fn parse_size(text: &str) -> Result<(usize, usize)> {
    let (w, h) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| anyhow!("size must look like WxH"))?;
    let w: usize = w.trim().parse().context("grid width")?;
    let h: usize = h.trim().parse().context("grid height")?;
    if w == 0 || h == 0 {
        bail!("grid dimensions must be positive");
    }
    Ok((w, h))
}

fn parse_pixels(text: &str, (w, h): (usize, usize)) -> Result<Vec<(usize, usize)>> {
    text.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            let (x, y) = pair
                .split_once(',')
                .ok_or_else(|| anyhow!("pixel `{pair}` must look like x,y"))?;
            let x: usize = x.trim().parse().with_context(|| format!("pixel `{pair}`"))?;
            let y: usize = y.trim().parse().with_context(|| format!("pixel `{pair}`"))?;
            if x >= w || y >= h {
                bail!("pixel `{pair}` outside a {w}x{h} grid");
            }
            Ok((x, y))
        })
        .collect()
}

pub fn grid(size: &str, black: &str, out: Option<&Path>) -> Result<Outcome> {
    let dims = parse_size(size)?;
    let pixels = parse_pixels(black, dims)?;
    let m = grid_model(dims.0, dims.1, &pixels)?;
    let file = model_to_file(&m);
    let mut text = String::new();
    match out {
        Some(path) => {
            write_json(path, &file)?;
            writeln!(text, "{}x{} grid with {} elements written to {}", dims.0, dims.1, m.size(), path.display())?;
        }
        None => writeln!(text, "{}", serde_json::to_string_pretty(&file)?)?,
    }
    Ok(Outcome {
        verdict: Verdict::Positive,
        result: json!({
            "width": dims.0,
            "height": dims.1,
            "black": pixels,
            "model": file,
        }),
        text,
    })
}

pub fn bmorph(model1: &Path, model2: &Path, map: &Path, depth: usize, vars: Option<&str>) -> Result<Outcome> {
    let m1 = read_model(model1)?;
    let m2 = read_model(model2)?;
    let f = StateMap::read(&m1, &m2, map)?;
    let vars: Vec<String> = match vars {
        Some(v) => v
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect(),
        None => m1
            .valuation()
            .keys()
            .chain(m2.valuation().keys())
            .cloned()
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect(),
    };
    for v in &vars {
        formula(v)?;
    }
    let report = check_bounded_morphism(&m1, &m2, &f);
    let mut text = String::new();
    let conditions: Vec<Value> = report
        .conditions
        .iter()
        .map(|c| {
            json!({
                "condition": c.condition.to_string(),
                "passed": c.passed(),
                "witness": c.witness,
            })
        })
        .collect();
    for c in &report.conditions {
        match &c.witness {
            None => writeln!(text, "{}: pass", c.condition)?,
            Some(w) => writeln!(
                text,
                "{}: FAIL at source {} target {}{}",
                c.condition,
                show(&w.source),
                show(&w.target),
                w.atom.as_ref().map(|a| format!(" atom {a}")).unwrap_or_default()
            )?,
        }
    }
    let bounded = report.is_bounded_morphism();
    let mut result = json!({
        "conditions": conditions,
        "bounded_morphism": bounded,
    });
    let verdict = if bounded {
        let pres = find_truth_violation(&m1, &m2, &f, &vars, depth);
        writeln!(
            text,
            "truth of {} formulas of depth <= {depth} over {}: {}",
            pres.formulas,
            show(&vars),
            if pres.preserved() { "preserved" } else { "NOT preserved" }
        )?;
        if let Some(v) = &pres.violation {
            writeln!(text, "  {} differs at {} and {}", v.formula, v.source_state, v.target_state)?;
        }
        let ok = pres.preserved();
        result["truth_preservation"] = serde_json::to_value(&pres)?;
        if ok {
            Verdict::Positive
        } else {
            Verdict::InternalFailure
        }
    } else {
        writeln!(text, "not a bounded morphism")?;
        Verdict::Negative
    };
    Ok(Outcome { verdict, result, text })
}

pub fn table() -> Outcome {
    let mut text = String::new();
    let rows: Vec<Value> = table_registry()
        .iter()
        .map(|row| {
            let mixed = row.mixed_form.as_ref().map(|f| f.to_string());
            let _ = writeln!(
                text,
                "{:<24} {:<14} {:<28} {:<28} {}",
                row.name,
                row.spec.to_string(),
                row.diamond_form.to_string(),
                row.box_form.to_string(),
                mixed.clone().unwrap_or_default()
            );
            json!({
                "name": row.name,
                "spec": row.spec.to_string(),
                "diamond_form": row.diamond_form.to_string(),
                "box_form": row.box_form.to_string(),
                "mixed_form": mixed,
                "fmp_shape": row.spec.has_fmp_shape(),
            })
        })
        .collect();
    Outcome {
        verdict: Verdict::Positive,
        result: json!({ "rows": rows }),
        text,
    }
}
