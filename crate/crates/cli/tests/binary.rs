use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_coarsetop"));
    c.env_remove("COARSETOP_SEED");
    c
}

#[test]
fn seed_comes_from_the_environment() {
    let out = bin().args(["oracle", "--trials", "5", "--no-artifact"]).env("COARSETOP_SEED", "99").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("  seed: 99\n"));

    let out = bin()
        .args(["oracle", "--trials", "5", "--seed", "5", "--no-artifact"])
        .env("COARSETOP_SEED", "99")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("  seed: 5\n"));

    let out = bin().args(["oracle", "--trials", "5", "--no-artifact"]).output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("  seed: 42\n"));

    let out = bin().args(["oracle", "--trials", "5", "--no-artifact"]).env("COARSETOP_SEED", "x").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes_reach_the_process() {
    let out = bin().args(["oscillate", "--expr", "sin(x)", "--no-artifact"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = bin().args(["oscillate", "--expr", "sin(", "--no-artifact"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("offset 4"));
}

#[test]
fn artifact_is_written_in_the_working_directory_by_default() {
    let dir = std::env::temp_dir().join(format!("coarsetop-cwd-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = bin().args(["enumerate", "--n", "3", "--kind", "prebornology"]).current_dir(&dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.join("coarsetop-report.json")).unwrap();
    assert!(text.contains("\"schema\": \"coarsetop.report\""));
    let shown = bin().args(["report"]).current_dir(&dir).output().unwrap();
    assert_eq!(shown.stdout, out.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
