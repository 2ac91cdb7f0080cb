//! ASCII and Unicode spellings of the same input.

use rand::Rng;

/// Unicode spelling of each operator and its ASCII alternatives.
pub const SPELLINGS: &[(&str, &[&str])] = &[
    ("⊢", &["|-"]),
    ("∧", &["/\\", "&&"]),
    ("∨", &["\\/", "||"]),
    ("⇒", &["=>", "->"]),
    ("¬", &["~", "!"]),
    ("∀", &["forall "]),
    ("∃", &["exists "]),
    ("⊤", &["true"]),
    ("⊥", &["false"]),
    ("≤", &["<="]),
    ("≥", &[">="]),
    ("−", &["-"]),
    ("×", &["*"]),
];

/// Replaces every Unicode operator by a randomly chosen ASCII spelling,
/// padded with spaces so neighbouring tokens cannot merge.
pub fn asciify(text: &str, rng: &mut impl Rng) -> String {
    let mut out = String::new();
    for c in text.chars() {
        let s = c.to_string();
        match SPELLINGS.iter().find(|(u, _)| *u == s) {
            Some((_, alts)) => {
                out.push(' ');
                out.push_str(alts[rng.gen_range(0..alts.len())]);
                out.push(' ');
            }
            None => out.push(c),
        }
    }
    out
}

/// Hand-written ASCII inputs and their Unicode spelling.
pub const SWAP_CORPUS: &[(&str, &str)] = &[
    ("|- p => q => (p /\\ q)", "⊢ p ⇒ q ⇒ (p ∧ q)"),
    ("p -> q, ~q |- ~p", "p ⇒ q, ¬q ⊢ ¬p"),
    ("p && q || r |- true", "p ∧ q ∨ r ⊢ ⊤"),
    ("false |- forall x. exists y. x <= y", "⊥ ⊢ ∀x. ∃y. x ≤ y"),
    ("!(x >= 2 * y - 1) |-", "¬(x ≥ 2 × y − 1) ⊢"),
    ("p \\/ q |- q \\/ p", "p ∨ q ⊢ q ∨ p"),
];
