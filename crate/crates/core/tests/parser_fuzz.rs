use proptest::prelude::*;
use twochild_core::querylang::{evaluate, format, parse, parse_event, ParseError};

const ATOMS: [&str; 16] = [
    "E.m", "E.f", "E.fN", "E.f!N", "E.mN", "E.m!N", "E.N", "E.!N", "Y.m", "Y.f", "Y.fN", "Y.f!N",
    "Y.mN", "Y.m!N", "Y.N", "Y.!N",
];

fn ws() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["", " ", "  ", "\t", "\n"])
}

/// Event text over the atoms and any of the given bound labels.
fn event_over(labels: &[&'static str]) -> BoxedStrategy<String> {
    let atoms = prop::sample::select(ATOMS.to_vec()).prop_map(String::from);
    let leaf = if labels.is_empty() {
        atoms.boxed()
    } else {
        prop_oneof![6 => atoms, 1 => prop::sample::select(labels.to_vec()).prop_map(String::from)].boxed()
    };
    leaf.prop_recursive(5, 32, 2, |inner| {
        prop_oneof![
            (ws(), inner.clone()).prop_map(|(w, e)| format!("!{w}{e}")),
            (inner.clone(), ws(), inner.clone()).prop_map(|(a, w, b)| format!("{a}{w}&{w}{b}")),
            (inner.clone(), ws(), inner.clone()).prop_map(|(a, w, b)| format!("{a}{w}+{w}{b}")),
            (ws(), inner).prop_map(|(w, e)| format!("({w}{e}{w})")),
        ]
    })
    .boxed()
}

fn event() -> BoxedStrategy<String> {
    event_over(&[])
}

fn atom_list() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(ATOMS.to_vec()), 1..5).prop_map(|v| v.join(", "))
}

fn form(labels: &[&'static str]) -> impl Strategy<Value = String> {
    let e = || event_over(labels);
    prop_oneof![
        e().prop_map(|e| format!("P({e})")),
        (e(), e()).prop_map(|(a, b)| format!("P({a} | {b})")),
        (e(), e(), e()).prop_map(|(a, c, b)| format!("odds({a} : {c} | {b})")),
        (e(), e(), e()).prop_map(|(a, c, b)| format!("bf({a} : {c} | {b})")),
        atom_list().prop_map(|a| format!("chain({a})")),
        Just("table".to_string()),
    ]
}

fn directives() -> impl Strategy<Value = String> {
    (
        prop::option::of(prop::sample::select(vec!["@regime(i0)", "@regime(i1)", "@regime(i2)"])),
        prop::option::of(prop::sample::select(vec!["@r(1/50)", "@r(0.3)", "@r(1/4)", "@r(0)", "@r(0.0001)"])),
        prop::option::of(prop::sample::select(vec!["@named(f)", "@named(m)"])),
    )
        .prop_map(|(a, b, c)| [a, b, c].into_iter().flatten().collect::<Vec<_>>().join(" "))
}

fn query() -> impl Strategy<Value = String> {
    (directives(), 0usize..=2).prop_flat_map(|(d, bound)| {
        let lets = match bound {
            0 => Just(String::new()).boxed(),
            1 => event().prop_map(|a| format!("let A = {a}; ")).boxed(),
            _ => (event(), event_over(&["A"]))
                .prop_map(|(a, b)| format!("let A = {a}; let B = {b}; "))
                .boxed(),
        };
        let labels: &'static [&'static str] = [&[][..], &["A"][..], &["A", "B"][..]][bound];
        (Just(d), lets, form(labels)).prop_map(|(d, l, f)| format!("{d} {l}{f}"))
    })
}

fn check_span(input: &str, e: &ParseError) -> Result<(), TestCaseError> {
    prop_assert!(e.span.start <= e.span.end, "{input:?}: {e:?}");
    prop_assert!(e.span.end <= input.len(), "{input:?}: {e:?}");
    prop_assert!(input.is_char_boundary(e.span.start) && input.is_char_boundary(e.span.end));
    prop_assert!(!e.message.is_empty());
    let annotated = e.annotate(input);
    prop_assert!(annotated.contains('^'));
    Ok(())
}

const VOCAB: [&str; 40] = [
    "P", "(", ")", "|", "&", "+", "!", ":", ",", ";", "=", "E.", "Y.", "m", "f", "N", "fN", "f!N",
    "E.f", "Y.fN", "odds", "bf", "chain", "table", "let", "A", "@regime", "@r", "@named", "(i1)",
    "(1/50)", "(f)", " ", "  ", "0.3", "1/0", "é", "\u{0}", "E", "Y",
];

fn token_soup() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(VOCAB.to_vec()), 0..30).prop_map(|v| v.concat())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn generated_queries_round_trip(s in query()) {
        let q = parse(&s).map_err(|e| TestCaseError::fail(format!("{s:?}: {e}")))?;
        let text = format(&q);
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{text:?}: {e}")))?;
        prop_assert_eq!(&back, &q);
        prop_assert_eq!(format(&back), text);
    }

    #[test]
    fn formatting_preserves_meaning(s in query()) {
        let q = parse(&s).unwrap();
        let back = parse(&format(&q)).unwrap();
        prop_assert_eq!(evaluate(&q, 5), evaluate(&back, 5));
    }

    #[test]
    fn event_display_round_trips(s in event()) {
        let e = parse_event(&s).unwrap();
        prop_assert_eq!(parse_event(&e.to_string()).unwrap(), e);
    }
}

proptest! {
    // 10000 token soups + 10000 mutated queries + 10000 arbitrary strings
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn fuzz_token_soup(s in token_soup()) {
        if let Err(e) = parse(&s) {
            check_span(&s, &e)?;
        }
    }

    #[test]
    fn fuzz_mutated_queries(s in query(), at in any::<prop::sample::Index>(), c in prop::sample::select(vec!['(', ')', '|', '&', '!', '@', ' ', 'x', ';', '.'])) {
        let mut chars: Vec<char> = s.chars().collect();
        let i = at.index(chars.len() + 1);
        if i < chars.len() && i % 2 == 0 {
            chars.remove(i);
        } else {
            chars.insert(i.min(chars.len()), c);
        }
        let mutated: String = chars.into_iter().collect();
        match parse(&mutated) {
            Ok(q) => prop_assert_eq!(parse(&format(&q)).unwrap(), q),
            Err(e) => check_span(&mutated, &e)?,
        }
    }

    #[test]
    fn fuzz_arbitrary_strings(s in "\\PC{0,40}") {
        if let Err(e) = parse(&s) {
            check_span(&s, &e)?;
        }
    }
}

#[test]
fn deep_nesting_is_rejected_not_overflowed() {
    let deep = format!("P({}E.f{})", "(".repeat(5000), ")".repeat(5000));
    assert!(parse(&deep).is_err());
    let bangs = format!("P({}E.f)", "!".repeat(5000));
    assert!(parse(&bangs).is_err());
}
