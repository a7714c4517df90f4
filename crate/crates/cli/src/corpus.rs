//! The shipped corpus, embedded so the binary works from any directory.

pub const FILES: &[(&str, &str)] = &[
    ("b_q2.hopf", include_str!("../../../corpus/b_q2.hopf")),
    ("b_q3_f7.hopf", include_str!("../../../corpus/b_q3_f7.hopf")),
    ("g_q2.hopf", include_str!("../../../corpus/g_q2.hopf")),
    ("g_q3_f7.hopf", include_str!("../../../corpus/g_q3_f7.hopf")),
    ("h1.hopf", include_str!("../../../corpus/h1.hopf")),
    ("h2.hopf", include_str!("../../../corpus/h2.hopf")),
    ("kxy_coaction.hopf", include_str!("../../../corpus/kxy_coaction.hopf")),
    ("kz.hopf", include_str!("../../../corpus/kz.hopf")),
    ("kz_f7.hopf", include_str!("../../../corpus/kz_f7.hopf")),
    ("manifest.txt", include_str!("../../../corpus/manifest.txt")),
    ("negative/b_bad_antipode.hopf", include_str!("../../../corpus/negative/b_bad_antipode.hopf")),
    ("negative/g_bad_antipode.hopf", include_str!("../../../corpus/negative/g_bad_antipode.hopf")),
    ("negative/h1_bad_antipode.hopf", include_str!("../../../corpus/negative/h1_bad_antipode.hopf")),
    ("negative/h2_bad_comul.hopf", include_str!("../../../corpus/negative/h2_bad_comul.hopf")),
    ("negative/kxy_coaction_noncentral.hopf", include_str!("../../../corpus/negative/kxy_coaction_noncentral.hopf")),
    ("negative/kz_bad_counit.hopf", include_str!("../../../corpus/negative/kz_bad_counit.hopf")),
    ("negative/seq_bad_inclusion.seq", include_str!("../../../corpus/negative/seq_bad_inclusion.seq")),
    ("negative/seq_bad_projection.seq", include_str!("../../../corpus/negative/seq_bad_projection.seq")),
    ("seq_kz_g_b.seq", include_str!("../../../corpus/seq_kz_g_b.seq")),
    ("seq_kz_g_b_f7.seq", include_str!("../../../corpus/seq_kz_g_b_f7.seq")),
    ("seq_kz_h2_h1.seq", include_str!("../../../corpus/seq_kz_h2_h1.seq")),
];

pub fn get(rel: &str) -> Option<&'static str> {
    FILES.iter().find(|(p, _)| *p == rel).map(|(_, t)| *t)
}
