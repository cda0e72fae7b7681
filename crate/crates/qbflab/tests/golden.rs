//! Byte-exact goldens: the saturation refutations of the first two equality
//! formulas, and their QDIMACS renderings, are pinned files.

use qbflab::qures::{check, parse_trace, prove_saturate, write_trace, Mode};
use qbflab::{gen, qdimacs, Caps};

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).expect("golden file")
}

#[test]
fn equality_traces_match_goldens() {
    for n in [1u32, 2] {
        let q = gen::equality(n).unwrap();
        let proof = prove_saturate(&q, &Caps::default(), Mode::QuRes)
            .unwrap()
            .unwrap();
        let trace = write_trace(&proof);
        assert_eq!(trace, golden(&format!("eq{n}.qrp")), "eq{n} trace drifted");
        // the golden parses back and is accepted
        let parsed = parse_trace(&trace, &q).unwrap();
        check(&q, &parsed, Mode::QuRes).unwrap();
        assert_eq!(write_trace(&parsed), trace);
    }
}

#[test]
fn equality_qdimacs_matches_goldens() {
    for n in [1u32, 2] {
        let q = gen::equality(n).unwrap();
        let text = qdimacs::write(&q);
        assert_eq!(text, golden(&format!("eq{n}.qdimacs")));
        assert_eq!(qdimacs::write(&qdimacs::parse(&text).unwrap()), text);
    }
}

#[test]
fn seeded_generation_is_byte_identical_across_runs() {
    let write = || {
        let (q, meta) = gen::random_q(5, 2, 9, 0xFEED).unwrap();
        (
            qdimacs::write(&q),
            serde_json::to_string_pretty(&meta).unwrap(),
        )
    };
    let (q1, m1) = write();
    let (q2, m2) = write();
    assert_eq!(q1, q2);
    assert_eq!(m1, m2);
    let w12 = qdimacs::write(&gen::random_12qcnf(2, 5, 7, 3).unwrap());
    assert_eq!(
        w12,
        qdimacs::write(&gen::random_12qcnf(2, 5, 7, 3).unwrap())
    );
    let w2s = qdimacs::write(&gen::random_2sat(8, 12, 4).unwrap());
    assert_eq!(w2s, qdimacs::write(&gen::random_2sat(8, 12, 4).unwrap()));
}
