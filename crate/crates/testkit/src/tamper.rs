//! Saved proofs and single-field mutations of them.

use prooftree::auto::{auto_prove, Limits};
use prooftree::hoare::HoareRule;
use prooftree::lk::LkRule;
use prooftree::smt::apply_z3_axiom;
use prooftree::smt::{SmtVerdict, ValidityOracle};
use prooftree::{parse_sequent, parse_triple, Goal, ProofTree, Rule};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::oracle::TruthTable;
use crate::{fuzz, gen};

/// A valid, possibly partial proof. Some use solver closures on
/// propositional goals, some are Hoare proofs, some have hidden nodes.
pub fn valid_proof(rng: &mut impl Rng) -> ProofTree {
    let mut tree = if rng.gen_bool(0.5) {
        let goal = gen::prop_sequent(rng, 3, 3, 2);
        let mut tree = auto_prove(&goal, Limits::default()).tree;
        // swap some closed leaves for solver closures
        for path in fuzz::inner_paths(&tree) {
            let node = tree.node(&path).unwrap();
            if node.children().is_empty() && rng.gen_bool(0.4) {
                let pruned = tree.prune_at(&path).unwrap();
                let (t, _) = apply_z3_axiom(&pruned, &path, &TruthTable).unwrap();
                tree = t;
            }
        }
        tree
    } else {
        let goal = fuzz::random_goal(rng);
        fuzz::grow(rng, ProofTree::new(goal), 10)
    };
    for path in fuzz::all_paths(&tree) {
        if rng.gen_bool(0.1) {
            tree = tree.set_hidden(&path, true).unwrap();
        }
    }
    tree
}

fn rule_names() -> Vec<&'static str> {
    let mut out: Vec<_> = LkRule::ALL.iter().map(|r| Rule::Lk(*r).name()).collect();
    out.extend(HoareRule::ALL.iter().map(|r| Rule::Hoare(*r).name()));
    out
}

/// JSON pointers of every leaf value.
fn leaves(v: &Value, here: String, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                leaves(x, format!("{here}/{k}"), out);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                leaves(x, format!("{here}/{i}"), out);
            }
        }
        _ => out.push(here),
    }
}

fn mutate_string(rng: &mut impl Rng, s: &str) -> String {
    match rng.gen_range(0..6) {
        0 => rule_names().choose(rng).unwrap().to_string(),
        1 => gen::prop_formula(rng, 3, 2).to_string(),
        2 => gen::fo_formula(rng, 2).to_string(),
        3 => gen::condition(rng, 1).to_string(),
        4 if !s.is_empty() => {
            let mut chars: Vec<char> = s.chars().collect();
            chars.remove(rng.gen_range(0..chars.len()));
            chars.into_iter().collect()
        }
        _ => {
            let mut chars: Vec<char> = s.chars().collect();
            let c = *['p', 'q', '~', '(', 'x', '1', ' ', '∧']
                .choose(rng)
                .unwrap();
            chars.insert(rng.gen_range(0..=chars.len()), c);
            chars.into_iter().collect()
        }
    }
}

/// Changes one thing in a saved proof and says what. Anything may change,
/// including the version, the goal text and the JSON types.
pub fn mutate(rng: &mut impl Rng, doc: &mut Value) -> String {
    match rng.gen_range(0..5) {
        0 => {
            let hidden = vec![rng.gen_range(0..3), rng.gen_range(0..3)];
            doc["hiddenPaths"]
                .as_array_mut()
                .unwrap()
                .push(json!(hidden));
            format!("hide {hidden:?}")
        }
        1 => {
            let mut ptrs = Vec::new();
            leaves(doc, String::new(), &mut ptrs);
            let ptr = ptrs.choose(rng).unwrap().clone();
            let leaf = doc.pointer_mut(&ptr).unwrap();
            *leaf = match leaf {
                Value::String(s) => json!(mutate_string(rng, s)),
                Value::Number(n) => {
                    let n = n.as_i64().unwrap_or(0);
                    json!(n + *[-1, 1, 2].choose(rng).unwrap())
                }
                Value::Bool(b) => json!(!*b),
                _ => json!(null),
            };
            format!("rewrite {ptr}")
        }
        _ => mutate_step(rng, doc),
    }
}

/// Changes one field of the step list and keeps the file well-typed, so a
/// rejection can only come from replay.
pub fn mutate_step(rng: &mut impl Rng, doc: &mut Value) -> String {
    let steps = doc["steps"].as_array().map_or(0, Vec::len);
    if steps == 0 {
        let rule = *rule_names().choose(rng).unwrap();
        doc["steps"] = json!([{"path": [], "rule": rule}]);
        return format!("add a {rule} step");
    }
    let i = rng.gen_range(0..steps);
    match rng.gen_range(0..8) {
        0 => {
            doc["steps"].as_array_mut().unwrap().remove(i);
            format!("drop step {i}")
        }
        1 if i + 1 < steps => {
            doc["steps"].as_array_mut().unwrap().swap(i, i + 1);
            format!("swap steps {i} and {}", i + 1)
        }
        2 => {
            let step = &mut doc["steps"][i];
            let flag = step
                .get("pseudoAxiom")
                .and_then(Value::as_bool)
                .unwrap_or(false);
            step["pseudoAxiom"] = json!(!flag);
            format!("flip pseudoAxiom of step {i}")
        }
        3 => {
            doc["steps"][i]["rule"] = json!("Z3Axiom");
            doc["steps"][i]["pseudoAxiom"] = json!(true);
            doc["steps"][i]["args"] = json!({});
            format!("turn step {i} into a solver closure")
        }
        _ => {
            let mut ptrs = Vec::new();
            leaves(&doc["steps"][i], format!("/steps/{i}"), &mut ptrs);
            let ptr = ptrs.choose(rng).unwrap().clone();
            let key = ptr.rsplit('/').next().unwrap().to_string();
            let leaf = doc.pointer_mut(&ptr).unwrap();
            *leaf = match leaf {
                Value::String(s) if key == "side" => {
                    json!(if s == "left" { "right" } else { "left" })
                }
                Value::String(_) if key == "rule" => json!(rule_names().choose(rng).unwrap()),
                Value::String(s) => json!(mutate_string(rng, s)),
                Value::Number(n) => {
                    let n = n.as_u64().unwrap_or(0);
                    json!(if n > 0 && rng.gen_bool(0.5) {
                        n - 1
                    } else {
                        n + rng.gen_range(1..3)
                    })
                }
                Value::Bool(b) => json!(!*b),
                // an empty path or argument list
                _ => json!([]),
            };
            format!("rewrite {ptr}")
        }
    }
}

/// The tree revalidates, every solver closure is a tautology, and the root
/// proves what the file says it proves.
pub fn trustworthy(tree: &ProofTree, doc: &serde_json::Value) -> Result<(), String> {
    tree.revalidate_with(&mut |_, s| match TruthTable.check(s) {
        Ok(SmtVerdict::Valid) => Ok(()),
        other => Err(format!("{other:?}")),
    })
    .map_err(|e| e.to_string())?;
    let text = doc["goalText"].as_str().ok_or("no goal text")?;
    let claimed = match tree.goal() {
        Goal::Lk(_) => parse_sequent(text).map(Goal::Lk),
        Goal::Hoare(_) => parse_triple(text).map(Goal::Hoare),
    }
    .map_err(|e| e.to_string())?;
    if &claimed != tree.goal() {
        return Err(format!(
            "root proves {} but the file claims {text}",
            tree.goal()
        ));
    }
    Ok(())
}
