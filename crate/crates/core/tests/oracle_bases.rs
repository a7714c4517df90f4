//! Normal-word bases against quotient dimensions computed by exact linear
//! algebra over the free algebra.

use hopfcert::dsl::parse_presentation;
use hopfcert::oracle::quotient_dims;

fn corpus(name: &str) -> String {
    std::fs::read_to_string(format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn check(name: &str, d: usize, margin: usize) {
    let text = corpus(name);
    let a = parse_presentation(&text).unwrap().hopf;
    let basis = a.rewrite().degree_basis(d).unwrap().count_by_degree();
    let parsed = parse_presentation(&text).unwrap();
    assert_eq!(quotient_dims(&parsed, d, margin).unwrap(), basis, "{name}");
}

#[test]
fn kz_bases() {
    check("kz.hopf", 4, 0);
    check("kz_f7.hopf", 4, 0);
}

#[test]
fn h1_basis() {
    check("h1.hopf", 4, 0);
}

#[test]
fn h2_basis() {
    check("h2.hopf", 4, 4);
}

#[test]
fn borel_bases() {
    check("b_q2.hopf", 4, 4);
    check("b_q3_f7.hopf", 4, 4);
}

#[test]
fn g_bases() {
    check("g_q2.hopf", 4, 4);
    check("g_q3_f7.hopf", 4, 4);
}

#[test]
fn coaction_host_basis() {
    check("kxy_coaction.hopf", 4, 4);
}

#[test]
fn g_basis_factors_through_ind_e() {
    let a = parse_presentation(&corpus("g_q2.hopf")).unwrap().hopf;
    let al = a.alphabet();
    let d = al.letter("d").unwrap();
    let dinv = al.letter("D").unwrap();
    let x = |i: usize, j: usize| al.letter(&format!("x{i}{j}")).unwrap();
    let index_of = |l| (1..=2).flat_map(|i| (1..=2).map(move |j| (i, j))).find(|&(i, j)| x(i, j) == l);
    let basis = a.rewrite().degree_basis(4).unwrap();
    let mut per_length = [0usize; 5];
    for w in &basis.basis {
        let ls = w.letters();
        let k = ls.iter().take_while(|l| **l == d).count().max(ls.iter().take_while(|l| **l == dinv).count());
        let rest: Vec<(usize, usize)> = ls[k..]
            .iter()
            .map(|l| index_of(*l).unwrap_or_else(|| panic!("{} is not d^k x_I", al.word_string(w))))
            .collect();
        for p in rest.windows(2) {
            let ((i, j), (i2, j2)) = (p[0], p[1]);
            assert!(!(i == 2 && i2 == 1) && !(j == 2 && j2 == 1), "{} is outside Ind(E)", al.word_string(w));
        }
        if k == 0 {
            per_length[rest.len()] += 1;
        }
    }
    assert_eq!(per_length, [1, 4, 9, 16, 25]);
    let counts = basis.count_by_degree();
    for (n, &count) in counts.iter().enumerate() {
        let expected: usize = (0..=n).map(|m| if m == n { (m + 1) * (m + 1) } else { 2 * (m + 1) * (m + 1) }).sum();
        assert_eq!(count, expected, "degree {n}");
    }
}

