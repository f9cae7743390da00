use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn gfsynth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfsynth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ingest_prints_fact_program() {
    let conllu = fixture("table1/bill_plays_a_game.conllu");
    let out = stdout(&gfsynth(&["ingest", path(&conllu)]));
    assert_eq!(out, std::fs::read_to_string(fixture("table1/bill_plays_a_game.facts")).unwrap());
}

#[test]
fn synthesize_export_linearize() {
    let dir = tempfile::tempdir().unwrap();
    let fragments = dir.path().join("fragments");
    let conllu = fixture("structures/structures.conllu");
    let out = gfsynth(&[
        "synthesize",
        path(&conllu),
        "-o",
        path(&fragments),
        "--dump-structures",
        "--dump-components",
        "--dump-models",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let structures = std::fs::read_to_string(fragments.join("structures.tsv")).unwrap();
    assert_eq!(
        structures,
        "s1_birds_fly\t1\t1\ns2_bill_plays_a_game\t2\t2\ns3_bill_wants_to_play\t3\t3\ns4_cathy_is_gorgeous\t4\t2\ns5_the_game_is_played\t5\t2\n"
    );
    assert!(fragments.join("components.json").is_file());
    let models = std::fs::read_to_string(fragments.join("s2_bill_plays_a_game.models.txt")).unwrap();
    assert!(models.contains("structure(2,2)."));

    let name = dir.path().join("Bill");
    stdout(&gfsynth(&["export", path(&fragments), "-o", path(&name)]));
    for file in ["Bill.gf", "BillEng.gf", "Bill.json"] {
        assert!(dir.path().join(file).is_file(), "{file}");
    }

    let abs = dir.path().join("Bill.gf");
    let conc = dir.path().join("BillEng.gf");
    let from_gf = stdout(&gfsynth(&["linearize", "--grammar", path(&abs), path(&conc)]));
    let from_json = stdout(&gfsynth(&["linearize", "--grammar", path(&dir.path().join("Bill.json"))]));
    assert!(from_json.lines().any(|l| l == "Bill plays game"), "{from_json}");
    assert!(from_json.lines().any(|l| l == "Cathy is gorgeous"), "{from_json}");
    assert_eq!(from_gf.lines().count(), 5);
    let one = stdout(&gfsynth(&[
        "linearize",
        "--grammar",
        path(&dir.path().join("Bill.json")),
        "--fun",
        "sent_s4_cathy_is_gorgeous",
        "--period",
    ]));
    assert_eq!(one, "Cathy is gorgeous.\n");
}

#[test]
fn synthesize_reports_unrecognized_sentences() {
    let dir = tempfile::tempdir().unwrap();
    let out = gfsynth(&["synthesize", path(&fixture("corpus/mathematics/parses.conllu")), "-o", path(dir.path())]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("mathematics_12: structure not recognized"), "{err}");
    assert!(err.contains("22 of 24"), "{err}");
    let out = gfsynth(&[
        "synthesize",
        path(&fixture("corpus/mathematics/parses.conllu")),
        "-o",
        path(dir.path()),
        "--dump-structures",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let structures = std::fs::read_to_string(dir.path().join("structures.tsv")).unwrap();
    assert!(structures.contains("mathematics_13\tUNRECOGNIZED\n"));
}

#[test]
fn linearize_people_grammar() {
    let out = stdout(&gfsynth(&[
        "linearize",
        "--grammar",
        path(&fixture("gf/People.gf")),
        path(&fixture("gf/PeopleEng.gf")),
        "--fun",
        "simple_sent Bill Play Soccer",
    ]));
    assert_eq!(out, "Bill plays soccer\n");
}

#[test]
fn verbalize_triples_and_atoms() {
    let out = stdout(&gfsynth(&[
        "verbalize",
        "--annotations",
        path(&fixture("people_ontology/annotations.tsv")),
        "--parses",
        path(&fixture("people_ontology/annotations.conllu")),
        "--triples",
        path(&fixture("people_ontology/triples.tsv")),
    ]));
    assert_eq!(out, std::fs::read_to_string(fixture("people_ontology/expected.txt")).unwrap());

    let out = gfsynth(&[
        "verbalize",
        "--annotations",
        path(&fixture("people_ontology/annotations.tsv")),
        "--parses",
        path(&fixture("people_ontology/annotations.conllu")),
        "--atoms",
        path(&fixture("phylotastic/atoms.lp")),
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("input/2") && err.contains("typeof/2"), "{err}");
}

#[test]
fn eval_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.csv");
    let details = dir.path().join("details.json");
    let out = gfsynth(&[
        "eval",
        "--corpus",
        path(&fixture("corpus")),
        "--report",
        path(&report),
        "--details",
        path(&details),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(&report).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("portal,n_sentences,n_recognized,n_bleu_assessable,bleu3,rouge1,rouge2,rougeL")
    );
    let counts: Vec<String> = lines.map(|l| l.split(',').take(3).collect::<Vec<_>>().join(",")).collect();
    assert_eq!(counts, ["food_and_drink,23,23", "mathematics,24,22", "people,15,15"]);
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&details).unwrap()).unwrap();
    assert_eq!(json["people"].as_array().unwrap().len(), 15);
}

#[test]
fn missing_input_fails_cleanly() {
    let out = gfsynth(&["ingest", "/nonexistent/file.conllu"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: reading"));
}
