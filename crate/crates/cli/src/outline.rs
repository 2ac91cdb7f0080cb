//! Plain-text rendering of a proof tree, one node per line, premises
//! indented under their conclusion.

use prooftree::{NodePath, ProofTree};

pub fn outline(tree: &ProofTree) -> String {
    let mut out = String::new();
    tree.visit(&mut NodePath::root(), &mut |path, node| {
        let indent = "  ".repeat(path.0.len());
        let label = match node.rule() {
            None => "open".to_string(),
            Some(r) if r.is_pseudo_axiom() => "Z3, pseudo-axiom".to_string(),
            Some(r) => r.name().to_string(),
        };
        let hidden = if node.is_hidden() { " hidden" } else { "" };
        out.push_str(&format!(
            "{indent}{path} {}  ({label}){hidden}\n",
            node.goal()
        ));
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use prooftree::auto::{auto_prove, Limits};

    #[test]
    fn walkthrough_outline() {
        let goal = prooftree::parse_sequent("|- p => q => (p /\\ q)").unwrap();
        let tree = auto_prove(&goal, Limits::default()).tree;
        assert_eq!(
            outline(&tree),
            "[] ⊢ p ⇒ q ⇒ (p ∧ q)  (ImpR)\n\
             \x20 [0] p ⊢ q ⇒ (p ∧ q)  (ImpR)\n\
             \x20   [0,0] p, q ⊢ p ∧ q  (AndR)\n\
             \x20     [0,0,0] p, q ⊢ p  (Id)\n\
             \x20     [0,0,1] p, q ⊢ q  (Id)\n"
        );
    }
}
