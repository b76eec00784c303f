mod common;

use circuit_forge::codec::{decode, encode};
use circuit_forge::evo::{
    ev_circ, ev_o, ev_o_detailed, hardwire, interleave_family, parse_manifest, projection_circuit, write_manifest, Hardwired,
    ManifestEntry, MemberShape,
};
use circuit_forge::{BitString, Cap, Circuit};
use common::{bs, oracle_eval, oracle_valid, random_circuit, rng, strings};
use proptest::collection::vec;
use proptest::prelude::*;

fn arb_circuit() -> impl Strategy<Value = Circuit> {
    (any::<u64>(), 1usize..=5, 1usize..=3, 0usize..=4).prop_map(|(seed, m, n, depth)| random_circuit(&mut rng(seed), m, n, depth))
}

fn arb_bits(max: usize) -> impl Strategy<Value = BitString> {
    vec(any::<bool>(), 0..max).prop_map(|b| bs(&b))
}

proptest! {
    #[test]
    fn ev_o_preserves_length(c in arb_bits(200), x in arb_bits(12)) {
        let (c2, y) = ev_o(&c, &x);
        prop_assert_eq!(c2.len() + y.len(), c.len() + x.len());
        prop_assert_eq!(c2, c);
    }

    #[test]
    fn ev_circ_on_codes(c in arb_circuit(), seed in any::<u64>()) {
        let code = encode(&c);
        let x = BitString::from_index(seed % (1 << c.inputs()), c.inputs());
        let (c2, y) = ev_circ(&code, &x);
        prop_assert_eq!(&c2, &code);
        prop_assert_eq!(y.bits(), &oracle_eval(&c, x.bits())[..]);
        // balance between the input and output pairs
        let (input, output) = (code.len() + x.len(), c2.len() + y.len());
        prop_assert!(input <= 2 * output && output <= 2 * input);
    }

    #[test]
    fn ev_o_fires_only_on_the_condition(c in arb_circuit(), seed in any::<u64>()) {
        let code = encode(&c);
        let x = BitString::from_index(seed % (1 << c.inputs()), c.inputs());
        let m = c.inputs() as f64;
        let condition = c.inputs() == c.outputs() && code.len() as f64 <= 12.0 * m * (2.0 * m).log2();
        let o = ev_o_detailed(&code, &x);
        prop_assert_eq!(o.fired, condition);
        prop_assert_eq!(o.value.len(), x.len());
    }

    #[test]
    fn hardwire_commutes_with_evaluation(c in arb_circuit(), k in 0usize..=5, seed in any::<u64>()) {
        let k = k.min(c.inputs());
        let p = BitString::from_index(seed % (1 << k), k);
        let h = hardwire(&c, &p).unwrap();
        prop_assert_eq!(h.inputs(), c.inputs() - k);
        if let Hardwired::Circuit(hc) = &h {
            prop_assert!(oracle_valid(hc));
        }
        for x in strings(c.inputs() - k) {
            let full: Vec<bool> = p.bits().iter().copied().chain(x.iter().copied()).collect();
            prop_assert_eq!(h.evaluate(&bs(&x)).unwrap().into_bits(), oracle_eval(&c, &full));
        }
    }

    #[test]
    fn manifest_round_trips(shapes in vec((1usize..50, 1usize..50, 1usize..200), 0..5)) {
        let entries: Vec<ManifestEntry> = shapes
            .iter()
            .enumerate()
            .map(|(i, &(m, n, size))| ManifestEntry { path: format!("c{i}.circ"), shape: MemberShape { m, n, size } })
            .collect();
        prop_assert_eq!(parse_manifest(&write_manifest(&entries)).unwrap(), entries);
    }
}

#[test]
fn ev_circ_passes_non_codes_through() {
    let c = common::bs(&[true, false, true]);
    let x = common::bs(&[true, true]);
    assert_eq!(ev_circ(&c, &x), (c.clone(), x.clone()));
    assert_eq!(decode(&c), Circuit::identity(1).unwrap());
}

#[test]
fn toy_family_is_length_equality_preserving_and_onto() {
    let fam = interleave_family(
        vec![projection_circuit(3, 1).unwrap(), projection_circuit(7, 3).unwrap()],
        Cap::default(),
    )
    .unwrap();
    let mut covered: Vec<std::collections::BTreeSet<BitString>> = vec![Default::default(); 10];
    for len in 0..=9 {
        let mut lengths = std::collections::BTreeSet::new();
        for x in strings(len) {
            let y = fam.eval(&bs(&x));
            lengths.insert(y.len());
            covered[y.len()].insert(y);
        }
        assert_eq!(lengths.len(), 1, "length {len}");
        assert_eq!(lengths.into_iter().next(), Some(fam.output_len(len)));
    }
    for (l, set) in covered.iter().enumerate().take(4) {
        assert_eq!(set.len(), 1 << l, "output length {l}");
    }
}
