use psialg_cli::run;
use serde_json::Value;

fn go(args: &str) -> psialg_cli::Outcome {
    run(std::iter::once("psialg").chain(args.split_whitespace()))
}

fn json(args: &str) -> Value {
    let o = go(args);
    assert_eq!(o.code, 0, "{args}: {}", o.stderr);
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn small_n_is_a_usage_error() {
    let o = go("hilbert verify --kind an --n 2");
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("n >= 3"), "{}", o.stderr);
    assert!(o.stdout.is_empty());
}

#[test]
fn unknown_flags_and_bad_fields_exit_2() {
    assert_eq!(go("hilbert lee --n 4 --bogus").code, 2);
    assert_eq!(go("--field prime:12 hilbert lee --n 4").code, 2);
    assert_eq!(go("hilbert lee --kind an --n 4 --m 1").code, 2);
}

#[test]
fn koszul_budget_is_enforced() {
    let o = go("koszul --n 5 --kmax 6");
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("budget"), "{}", o.stderr);
}

#[test]
fn verify_theorem_a_small() {
    let r = json("verify-theorem-a --n 4 --max-total 5");
    assert_eq!(r["status"], "pass");
    assert!(r["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    assert_eq!(r["tool"], "psialg");
}

#[test]
fn three_points_table_is_all_ones() {
    let o = go("--format csv hilbert lee --n 3 --max-total 4");
    assert_eq!(o.code, 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let value = header.iter().position(|h| *h == "lee").expect("lee column");
    let mut rows = 0;
    for l in lines {
        let last = l.rsplit(',').nth(header.len() - 1 - value).unwrap();
        assert_eq!(last, "1", "{l}");
        rows += 1;
    }
    // monomials of degree <= 4 in 3 variables
    assert_eq!(rows, 35);
}

fn parse_degree(s: &str) -> Vec<u32> {
    s.trim_matches(|c| c == '(' || c == ')').split(',').map(|x| x.parse().unwrap()).collect()
}

#[test]
fn table_rows_sorted_by_total_then_lex() {
    let r = json("hilbert lee --n 4 --max-total 3");
    let rows = r["table"]["rows"].as_array().unwrap();
    let keys: Vec<(u32, Vec<u32>)> = rows
        .iter()
        .map(|row| {
            let a = parse_degree(row[0].as_str().unwrap());
            (a.iter().sum(), a)
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn markdown_and_json_agree_on_status() {
    let md = String::from_utf8(go("--format md presentation dump --kind bnm --n 2 --m 2").stdout).unwrap();
    assert!(md.contains("Overall status: **pass**"));
    let j = json("presentation dump --kind bnm --n 2 --m 2");
    assert_eq!(j["status"], "pass");
}

#[test]
fn seed_changes_samples_but_not_verdicts() {
    let a = json("--seed 1 sample --kind an --n 4 --count 5");
    let b = json("--seed 2 sample --kind an --n 4 --count 5");
    assert_ne!(a["data"], b["data"]);
    assert_eq!(a["status"], b["status"]);
    assert_eq!(a, json("--seed 1 sample --kind an --n 4 --count 5"));
}

#[test]
fn out_writes_the_report() {
    let path = std::env::temp_dir().join(format!("psialg-out-{}.json", std::process::id()));
    let o = go(&format!("--out {} gb run --kind an --n 4", path.display()));
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let r: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(r["status"], "pass");
    // the echo leaves out where the report went
    assert!(r["config"].get("out").is_none());
}

#[test]
fn prime_and_rational_fields_agree() {
    let q = json("--field rational hilbert brute --kind an --n 4 --max-total 3");
    let p = json("--field prime:101 hilbert brute --kind an --n 4 --max-total 3");
    assert_eq!(q["table"], p["table"]);
}
