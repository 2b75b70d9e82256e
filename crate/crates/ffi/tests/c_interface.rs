//! Compile and run a C client against the shipped header and staticlib.

use std::path::PathBuf;
use std::process::Command;

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Locate the staticlib produced alongside this test binary: test builds
/// place it in `target/<profile>/deps`, plain builds one level up.
fn staticlib_path() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    for dir in [deps, deps.parent().unwrap()] {
        let candidate = dir.join("libdualbraid_ffi.a");
        if candidate.exists() {
            return candidate;
        }
    }
    panic!("libdualbraid_ffi.a not found near {}", exe.display());
}

#[test]
fn header_is_valid_c() {
    let header = manifest_dir().join("include/dualbraid.h");
    let out = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"])
        .arg(&header)
        .output()
        .expect("cc is available");
    assert!(
        out.status.success(),
        "header does not compile: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn c_client_runs_a_suite() {
    let lib = staticlib_path();

    let src = r#"
#include <stdio.h>
#include <string.h>
#include "dualbraid.h"

int main(void) {
    DualbraidConfig *cfg = dualbraid_config_new();
    if (!cfg) return 10;
    if (dualbraid_config_set_order(cfg, 3) != DUALBRAID_OK) return 11;
    if (dualbraid_config_set_suites(cfg, "compare") != DUALBRAID_OK) return 12;
    DualbraidReport *report = NULL;
    DualbraidStatus st = dualbraid_run(cfg, &report);
    if (st != DUALBRAID_OK) return 13;
    if (dualbraid_report_passed(report) != 1) return 14;
    size_t passed = 0, failed = 0, skipped = 0;
    if (dualbraid_report_counts(report, &passed, &failed, &skipped) != DUALBRAID_OK) return 15;
    if (passed < 2 || failed != 0) return 16;
    char *json = dualbraid_report_to_json(report);
    if (!json || !strstr(json, "coincidence-wx-gh-closed-form")) return 17;
    dualbraid_string_free(json);
    dualbraid_report_free(report);
    dualbraid_config_free(cfg);
    printf("c client ok\n");
    return 0;
}
"#;
    let work = std::env::temp_dir().join("dualbraid_c_client");
    std::fs::create_dir_all(&work).unwrap();
    let c_path = work.join("client.c");
    let bin_path = work.join("client");
    std::fs::write(&c_path, src).unwrap();

    let compile = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest_dir().join("include"))
        .arg(&c_path)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin_path)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "client does not compile/link: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&bin_path).output().unwrap();
    assert!(
        run.status.success(),
        "client exited with {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).contains("c client ok"));
    let _ = std::fs::remove_dir_all(work);
}
