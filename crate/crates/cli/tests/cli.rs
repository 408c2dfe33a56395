use std::io::Write;
use std::process::{Command, Output, Stdio};

fn phscalc(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_phscalc"))
        .args(args)
        .env_remove("PHSCALC_MMAX")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    }
    drop(child.stdin.take());
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const GUTWIRTH: &str = "base curve var z conj;\npair g phs D = [0,1]*{0}, h = z;\n";

#[test]
fn corpus_passes() {
    let o = phscalc(&["corpus"], None);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(!out.contains("FAIL"));
    assert!(out.contains("16/16 passed"), "{out}");
}

#[test]
fn corpus_fault_fails_only_hopf() {
    let o = phscalc(&["corpus", "--inject-fault", "hopf-sign"], None);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(1));
    let failing: Vec<&str> = out.lines().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failing.len(), 1, "{out}");
    assert!(failing[0].starts_with("FAIL  hopf"), "{out}");
    let only = phscalc(&["corpus", "--filter", "hopf", "--inject-fault", "hopf-sign"], None);
    assert!(stdout(&only).lines().any(|l| l.starts_with("FAIL  hopf") && l.contains("D_u")));
}

#[test]
fn corpus_filter() {
    let o = phscalc(&["corpus", "--filter", "mj", "--machine"], None);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    assert!(out.contains("total=1"), "{out}");
    assert!(out.contains("case.mj=PASS"));
}

#[test]
fn mj_verify_subcommand() {
    let o = phscalc(&["mj", "verify", "--P", "1+w", "--r", "2", "--machine"], None);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("PASS h_P"));
    assert!(out.contains("h_p=true"));
    let bad = phscalc(&["mj", "verify", "--P", "x+y", "--r", "2"], None);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn mj_equiv_subcommand() {
    let o = phscalc(&["mj", "equiv", "--P1", "1+z", "--P2", "-1-z", "--r", "2", "--machine"], None);
    assert!(stdout(&o).contains("c=-1"), "{}", stdout(&o));
}

#[test]
fn downgrade_subcommand() {
    let o = phscalc(&["downgrade", "--weights", "2,-2,3,-3", "--labels", "Dzu,Dzv,Dwv,Dwu,E", "--machine"], None);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("rays=5"));
    assert!(out.contains("segdiv_matched={1}(Dwv)+{1}(Dzv)+[2,3](E)"), "{out}");
    assert!(out.contains("relation: E = "));
    let bad = phscalc(&["downgrade", "--weights", "2,-2,4,-4"], None);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn file_subcommands() {
    let dir = std::env::temp_dir().join(format!("phscalc-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("g.phs");
    std::fs::write(&path, format!("{GUTWIRTH}pair t phs D = [0,1]*{{3}}, h = 2*z-6;\n")).unwrap();
    let p = path.to_str().unwrap();

    let v = phscalc(&["validate", p, "--pair", "g"], None);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains("valid phs-pair"));

    let c = phscalc(&["convert", p, "--pair", "g", "--machine"], None);
    assert!(stdout(&c).contains("dpd=0"), "{}", stdout(&c));

    let g = phscalc(&["graded", p, "--pair", "g", "--mmax", "4", "--machine"], None);
    let out = stdout(&g);
    assert!(out.contains("generation_degree=1"), "{out}");
    assert!(out.contains("center_ideal=<z>"), "{out}");
    assert_eq!(out.lines().filter(|l| l.trim_start().starts_with(|c: char| c == '-' || c.is_ascii_digit())).count(), 9);

    let e = phscalc(&["equiv", p, "t", "g", "--machine"], None);
    assert!(stdout(&e).contains("equivalent=true"), "{}", stdout(&e));

    let cl = phscalc(&["classify", p], None);
    assert_eq!(cl.status.code(), Some(0));

    let missing = phscalc(&["validate", p, "--pair", "nope"], None);
    assert_eq!(missing.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn mmax_from_environment() {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_phscalc"));
    let o = cmd
        .args(["run", "-", "--machine"])
        .env("PHSCALC_MMAX", "3")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(format!("{GUTWIRTH}graded;").as_bytes())?;
            c.wait_with_output()
        })
        .unwrap();
    assert!(stdout(&o).contains("mmax=3"), "{}", stdout(&o));
    // the document wins over the environment
    let o = phscalc(&["run", "-", "--machine"], Some(&format!("{GUTWIRTH}graded mmax 5;")));
    assert!(stdout(&o).contains("mmax=5"));
    let o = phscalc(&["run", "-", "--machine"], Some(&format!("{GUTWIRTH}graded;")));
    assert!(stdout(&o).contains("mmax=12"));
}

#[test]
fn exit_codes() {
    let ok = phscalc(&["run", "-"], Some("base curve conj; pair dpd D = 0, h = w^2+1; validate"));
    assert_eq!(ok.status.code(), Some(0));
    let invalid = phscalc(&["run", "-"], Some("base curve conj; pair dpd D = {0}, h = 1; validate"));
    assert_eq!(invalid.status.code(), Some(1));
    assert!(stdout(&invalid).contains("fails at {0}"));
    let syntax = phscalc(&["run", "-"], Some("base curve conj;\nsegdiv [1,0]*{0};"));
    assert_eq!(syntax.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&syntax.stderr).contains("line 2, col 8"));
    let undeclared = phscalc(&["run", "-"], Some("base sphere; pair phs D = {1}*D_x, h = oneMinusZ;"));
    assert_eq!(undeclared.status.code(), Some(2));
    assert_eq!(phscalc(&["run", "/nonexistent/input.phs"], None).status.code(), Some(2));
    assert_eq!(phscalc(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let src = format!("{GUTWIRTH}validate; convert; graded mmax 6; classify; downgrade weights 1,-1,2;");
    let a = phscalc(&["run", "-", "--machine"], Some(&src));
    let b = phscalc(&["run", "-", "--machine"], Some(&src));
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
}
