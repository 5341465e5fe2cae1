//! Compiles and runs a small C program against the generated header and
//! the static library.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include <string.h>
#include "racs.h"

int main(void) {
    RacsConfig *cfg = NULL;
    if (racs_config_parse("node_count = 10\nsim_time = 30\nruns = 1\n", &cfg) != RACS_STATUS_OK) return 1;
    if (racs_config_set(cfg, "seed", "3") != RACS_STATUS_OK) return 2;
    RacsReport *rep = NULL;
    if (racs_run(cfg, &rep) != RACS_STATUS_OK) return 3;
    double eff = 0.0;
    if (racs_report_metric(rep, RACS_METRIC_REP_EFFICIENCY, &eff) != RACS_STATUS_OK) return 4;
    char *csv = racs_report_csv(rep);
    if (csv == NULL || strncmp(csv, "malicious_count,", 16) != 0) return 5;
    racs_string_free(csv);

    RacsAttributes a = {42, 100.0, 200.0, 150.0, 10.0, 8.0};
    uint64_t bits = 0;
    RacsAttributes b;
    if (racs_attributes_encode(&a, &bits) != RACS_STATUS_OK) return 6;
    if (racs_attributes_decode(bits, &b) != RACS_STATUS_OK || b.node_id != 42 || b.lat != 100.0) return 7;

    RacsApdResult r;
    if (racs_apd_eval(0.5, 0.5, 0.5, NAN, 100, 10, &r) != RACS_STATUS_OK) return 8;
    if (racs_check_props(0.5, 100.0, 1.0, 1.0, NULL) != RACS_STATUS_NULL_POINTER) return 9;
    if (strlen(racs_last_error()) == 0) return 10;

    racs_report_free(rep);
    racs_config_free(cfg);
    printf("ok %.3f\n", eff);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_lists_every_export() {
    let header =
        fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/racs.h")).unwrap();
    let src = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15, "{exports:?}");
    for name in exports {
        assert!(
            header.contains(&format!("{name}(")),
            "{name} missing from racs.h"
        );
    }
}

#[test]
fn c_program_links_and_runs() {
    let lib = target_dir().join("libracs_ffi.a");
    let cc = Command::new("cc").arg("--version").output();
    if cc.is_err() || !lib.exists() {
        eprintln!(
            "skipping: no C compiler or no static library at {}",
            lib.display()
        );
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    let bin = dir.path().join("main");
    fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&bin)
        .arg(&src)
        .arg("-I")
        .arg(concat!(env!("CARGO_MANIFEST_DIR"), "/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
