use std::collections::BTreeSet;

use prooftree::syntax::{alpha_eq, fresh_name, Formula, Term};
use prooftree_testkit::gen;
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn sample(seed: u64) -> (Formula, &'static str, Term) {
    let mut rng = gen::rng(seed);
    let f = gen::fo_formula(&mut rng, 5);
    let x = *gen::VARS.choose(&mut rng).unwrap();
    let t = gen::term(&mut rng, 2);
    (f, x, t)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn substituting_a_variable_for_itself_is_identity(seed in any::<u64>()) {
        let (f, x, _) = sample(seed);
        prop_assert!(alpha_eq(&f.substitute(x, &Term::var(x)), &f));
    }

    #[test]
    fn free_variables_after_substitution(seed in any::<u64>()) {
        let (f, x, t) = sample(seed);
        let after = f.substitute(x, &t).free_vars();
        let mut bound: BTreeSet<String> = f.free_vars();
        bound.remove(x);
        bound.extend(t.free_vars());
        prop_assert!(after.is_subset(&bound), "{f} [{t}/{x}]");
        if f.free_vars().contains(x) {
            prop_assert_eq!(after, bound);
        } else {
            prop_assert_eq!(after, f.free_vars());
        }
    }

    #[test]
    fn substitution_never_captures(seed in any::<u64>()) {
        // every free variable of t must stay free at each former occurrence of x
        let (f, x, t) = sample(seed);
        let g = f.substitute(x, &t);
        for v in t.free_vars() {
            if f.has_free(x) {
                prop_assert!(g.has_free(&v), "{v} captured in {g}");
            }
        }
    }

    #[test]
    fn alpha_equivalence_is_an_equivalence(a in any::<u64>(), b in any::<u64>()) {
        let (f, _, _) = sample(a);
        let (g, _, _) = sample(b);
        prop_assert!(alpha_eq(&f, &f));
        prop_assert_eq!(alpha_eq(&f, &g), alpha_eq(&g, &f));
        if alpha_eq(&f, &g) {
            prop_assert_eq!(f.free_vars(), g.free_vars());
        }
    }

    #[test]
    fn renaming_a_binder_keeps_alpha_class(seed in any::<u64>(), fresh in "[a-v][a-z0-9]{0,3}") {
        let (f, x, _) = sample(seed);
        prop_assume!(prooftree::syntax::is_identifier(&fresh));
        let body = f.clone();
        let q = Formula::forall(x, body.clone());
        prop_assume!(!body.all_names().contains(&fresh));
        let renamed = Formula::forall(fresh.clone(), body.substitute(x, &Term::var(fresh.clone())));
        prop_assert!(alpha_eq(&q, &renamed), "{q} vs {renamed}");
        // and transitivity through a second renaming
        let back = Formula::forall(x, renamed_body(&renamed).substitute(&fresh, &Term::var(x)));
        prop_assert!(alpha_eq(&renamed, &back));
        prop_assert!(alpha_eq(&q, &back));
    }

    #[test]
    fn fresh_names_avoid(base in "[a-z]{1,3}", avoid in proptest::collection::btree_set("[a-z]{1,3}[0-9]{0,2}", 0..40)) {
        prop_assert!(!avoid.contains(&fresh_name(&base, &avoid)));
    }
}

fn renamed_body(f: &Formula) -> Formula {
    match f {
        Formula::Forall(_, body) => (**body).clone(),
        _ => unreachable!(),
    }
}

#[test]
fn capture_avoiding_examples() {
    let f = prooftree::parse_formula("forall y. P(x, y)").unwrap();
    let g = f.substitute("x", &Term::var("y"));
    // the bound y is renamed away from the incoming y
    assert_eq!(g.to_string(), "∀y1. P(y, y1)");
    let f = prooftree::parse_formula("forall x. P(x)").unwrap();
    assert_eq!(f.substitute("x", &Term::int(3)), f);
}
