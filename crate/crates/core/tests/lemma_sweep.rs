use irk_core::lemmas::{check_subsemigroup, LemmaOptions};
use irk_core::subsemigroup::generated_by_at_most_two;
use irk_core::{DualSymInv, InverseAlgebra, SymInv};

fn sweep<A: InverseAlgebra>(alg: &A, opts: LemmaOptions) -> (usize, Vec<String>) {
    let subs = generated_by_at_most_two(alg).unwrap();
    let mut bad = Vec::new();
    for s in &subs {
        for v in check_subsemigroup(s, opts) {
            let gens: Vec<String> = s.generators().iter().map(|g| alg.format(g)).collect();
            bad.push(format!("<{}>: {v}", gens.join(", ")));
        }
    }
    (subs.len(), bad)
}

#[test]
fn partial_injections_of_three_points() {
    let alg = SymInv::new(3).unwrap();
    let opts = LemmaOptions {
        distributive: true,
        enumerate_local_algebras: true,
    };
    let (n, bad) = sweep(&alg, opts);
    assert!(n > 100);
    assert!(bad.is_empty(), "{}", bad[..bad.len().min(20)].join("\n"));
}

#[test]
fn block_bijections_of_three_points() {
    let alg = DualSymInv::new(3).unwrap();
    let opts = LemmaOptions {
        distributive: false,
        enumerate_local_algebras: true,
    };
    let (n, bad) = sweep(&alg, opts);
    assert!(n > 10);
    assert!(bad.is_empty(), "{}", bad[..bad.len().min(20)].join("\n"));
}
