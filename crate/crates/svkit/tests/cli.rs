use std::fs;
use std::process::Command;

fn svkit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_svkit"))
}

#[test]
fn prints_csv() {
    let out = svkit()
        .args(["--example", "1", "--scheme", "rsv", "--k", "1", "--n", "8,16", "--t-final", "0.2"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("scheme,k,n,T,metric,value,order\n"));
    assert!(text.contains("rsv,1,16,0.2,l2,"));
}

#[test]
fn flags_override_config_file() {
    let dir = std::env::temp_dir();
    let config = dir.join(format!("svkit-cli-{}.conf", std::process::id()));
    let out = dir.join(format!("svkit-cli-{}.md", std::process::id()));
    fs::write(&config, "scheme = lsv\nk = 2\nn = 8\nt-final = 0.1\nformat = csv\n").unwrap();
    let status = svkit()
        .arg("--config")
        .arg(&config)
        .args(["--format", "md", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("### LSV k=2"));
    fs::remove_file(&config).unwrap();
    fs::remove_file(&out).unwrap();
}

#[test]
fn bad_input_fails_with_message() {
    let out = svkit().args(["--example", "7"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown case"));
    let out = svkit().args(["--n", "16,8"]).output().unwrap();
    assert!(!out.status.success());
}
