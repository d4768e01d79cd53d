use ixcode_core::cellular::cellular_minsearch;
use ixcode_core::fitting::minrank_search;
use ixcode_core::fixtures;
use ixcode_core::oracle::{oracle_cellular, oracle_multisender, verify_decoding, SearchBounds};
use ixcode_core::{encode, parse_generator, parse_instance, render_instance, SearchConfig};

#[test]
fn fixtures_solve_verify_and_agree_with_oracle() {
    let cfg = SearchConfig::default();
    let bounds = SearchBounds::default();
    for (name, inst) in fixtures::all() {
        let (n_opt, gen, exact) = if inst.is_cellular() {
            let s = cellular_minsearch(&inst, &cfg).unwrap();
            (s.n_opt, s.generator, oracle_cellular(&inst, &bounds).unwrap().n_opt)
        } else {
            let s = minrank_search(&inst, &cfg).unwrap();
            (s.n_opt, s.generator, oracle_multisender(&inst, &bounds).unwrap().n_opt)
        };
        assert_eq!(n_opt, exact, "instance {name}");
        assert_eq!(gen.len(), n_opt);
        assert!(verify_decoding(&inst, &gen).unwrap().iter().all(|&ok| ok), "instance {name}");

        let text = gen.to_string();
        let back = parse_generator(&text, inst.n(), inst.q(), inst.sender_count()).unwrap();
        assert_eq!(back.to_string(), text);
        assert_eq!(parse_instance(&render_instance(&inst)).unwrap(), inst);
    }
}

#[test]
fn expected_optima() {
    let cfg = SearchConfig::default();
    assert_eq!(minrank_search(&fixtures::instance_b(), &cfg).unwrap().n_opt, 3);
    assert_eq!(cellular_minsearch(&fixtures::instance_c(), &cfg).unwrap().n_opt, 2);
    assert_eq!(cellular_minsearch(&fixtures::instance_d(), &cfg).unwrap().n_opt, 3);
}

#[test]
fn encoding_the_known_code_for_b() {
    let gen = fixtures::code_b();
    // s1: x1+x4, s2: x2+x4, s2: x2+x3
    let words = encode(&gen, &[1, 0, 1, 1]).unwrap();
    assert_eq!(words, vec![vec![0], vec![1, 1]]);
}
