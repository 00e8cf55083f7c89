use std::path::PathBuf;
use std::process::Command;

const CLIENT: &str = r#"
#include <dilatlab.h>
#include <math.h>
#include <stdio.h>
#include <string.h>

int main(void) {
    double l, c, p;
    if (dl_constants(1.5, 1, &l, &c, &p) != DL_STATUS_OK) return 1;
    if (fabs(l - 0.1875) > 1e-12 || fabs(c - 0.75) > 1e-12 || p != 2.0) return 2;

    DlPotential *well = NULL;
    if (dl_potential_gaussian(1.0, 0.0, -1.2, &well) != DL_STATUS_OK) return 3;
    double alpha = 0.0;
    if (dl_potential_alpha(well, &alpha) != DL_STATUS_OK) return 4;
    double rhs = 0.0;
    if (dl_bound_rhs("left_cone", 1.5, well, 1.0, NAN, &rhs) != DL_STATUS_OK) return 5;
    if (!(rhs > 0.0)) return 6;
    dl_potential_free(well);

    double ignored = 0.0;
    if (dl_potential_alpha(NULL, &ignored) != DL_STATUS_NULL_ARGUMENT) return 7;
    char *msg = dl_last_error_message();
    int described = msg != NULL && strlen(msg) > 0;
    dl_string_free(msg);
    if (!described) return 8;

    printf("alpha=%.12f rhs=%.12f version=%s\n", alpha, rhs, dl_version());
    return 0;
}
"#;

#[test]
fn c_client_builds_against_the_committed_header() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // cargo links the cdylib into debug/ on build but only deps/ on test
    let lib_dir = ["../../target/debug", "../../target/debug/deps"]
        .into_iter()
        .map(|d| crate_dir.join(d))
        .find(|d| d.join("libdilatlab_ffi.so").exists())
        .expect("cdylib should be built before integration tests");

    let work = tempfile::tempdir().unwrap();
    let source = work.path().join("client.c");
    let program = work.path().join("client");
    std::fs::write(&source, CLIENT).unwrap();

    let compile = Command::new("gcc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(crate_dir.join("include"))
        .arg(&source)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-ldilatlab_ffi")
        .arg(format!("-Wl,-rpath,{}", lib_dir.display()))
        .arg("-lm")
        .arg("-o")
        .arg(&program)
        .output()
        .expect("gcc should be runnable");
    assert!(
        compile.status.success(),
        "compile failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&program).output().expect("client should launch");
    assert_eq!(
        run.status.code(),
        Some(0),
        "client exit {:?}, stdout: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stdout)
    );
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("alpha=0.785398"), "stdout: {stdout}");
}
