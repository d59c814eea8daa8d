use std::ffi::{CStr, CString};
use std::ptr;

use nilreg_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = nilreg_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

struct Cat(*mut NilregCatalog);

impl Drop for Cat {
    fn drop(&mut self) {
        unsafe { nilreg_catalog_free(self.0) }
    }
}

fn builtin() -> Cat {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { nilreg_catalog_builtin(&mut p) }, NilregStatus::Ok);
    Cat(p)
}

#[test]
fn degrees_and_crit() {
    let cat = builtin();
    let mut d = 0usize;
    unsafe {
        assert_eq!(nilreg_bass_guivarch(cat.0, c("N4").as_ptr(), &mut d), NilregStatus::Ok);
        assert_eq!(d, 10);
        let (mut rel, mut sch) = (0usize, 0usize);
        assert_eq!(
            nilreg_subgroup_degrees(cat.0, c("N3").as_ptr(), c("K_ac").as_ptr(), &mut rel, &mut sch),
            NilregStatus::Ok
        );
        assert_eq!((rel, sch), (3, 1));
        let (mut p, mut q) = (0i64, 0i64);
        assert_eq!(nilreg_crit(cat.0, c("N4").as_ptr(), &mut p, &mut q), NilregStatus::Ok);
        assert_eq!((p, q), (3, 2));
        assert_eq!(nilreg_crit(cat.0, c("Z2").as_ptr(), &mut p, &mut q), NilregStatus::Ok);
        assert_eq!(q, 0);
    }
}

#[test]
fn errors_are_reported() {
    let cat = builtin();
    let mut d = 0usize;
    unsafe {
        assert_eq!(nilreg_bass_guivarch(cat.0, c("N9").as_ptr(), &mut d), NilregStatus::Catalog);
        assert!(last_error().contains("N9"));
        assert_eq!(nilreg_bass_guivarch(ptr::null(), c("N3").as_ptr(), &mut d), NilregStatus::NullPointer);
        assert_eq!(nilreg_bass_guivarch(cat.0, ptr::null(), &mut d), NilregStatus::NullPointer);
        let mut out = ptr::null_mut();
        assert_eq!(nilreg_catalog_from_json(c("{").as_ptr(), &mut out), NilregStatus::Catalog);
        assert!(out.is_null());
        assert_eq!(nilreg_bass_guivarch(cat.0, c("N3").as_ptr(), &mut d), NilregStatus::Ok);
        assert!(nilreg_last_error().is_null());
    }
}

#[test]
fn ball_counts_fill_the_buffer() {
    let cat = builtin();
    let mut buf = [0u64; 4];
    unsafe {
        assert_eq!(
            nilreg_ball_counts(cat.0, c("Z2").as_ptr(), 3, 0, buf.as_mut_ptr(), buf.len()),
            NilregStatus::Ok
        );
        assert_eq!(buf, [1, 5, 13, 25]);
        assert_eq!(
            nilreg_ball_counts(cat.0, c("Z2").as_ptr(), 4, 0, buf.as_mut_ptr(), buf.len()),
            NilregStatus::BufferTooSmall
        );
        assert_eq!(
            nilreg_ball_counts(cat.0, c("N4").as_ptr(), 3, 10, buf.as_mut_ptr(), buf.len()),
            NilregStatus::Budget
        );
    }
}

#[test]
fn catalog_round_trips_through_json() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../core/catalog/groups.json")).unwrap();
    let mut p = ptr::null_mut();
    unsafe {
        assert_eq!(nilreg_catalog_from_json(c(&text).as_ptr(), &mut p), NilregStatus::Ok);
        let owned = Cat(p);
        let (mut h1, mut h2) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(nilreg_catalog_hash(owned.0, &mut h1), NilregStatus::Ok);
        assert_eq!(nilreg_catalog_hash(builtin().0, &mut h2), NilregStatus::Ok);
        assert_eq!(CStr::from_ptr(h1), CStr::from_ptr(h2));
        nilreg_string_free(h1);
        nilreg_string_free(h2);
    }
}

#[test]
fn flow_through_the_abi() {
    let (mut y, mut d) = (0.0, 0.0);
    unsafe {
        assert_eq!(nilreg_flow(0.0, 0.3, &mut y, &mut d), NilregStatus::Ok);
        assert_eq!((y, d), (0.3, 1.0));
        assert_eq!(nilreg_flow(1.0, 0.0, &mut y, &mut d), NilregStatus::Ok);
        assert!((d - 1f64.exp()).abs() < 1e-12);
        assert_eq!(nilreg_flow(1.0, 2.0, &mut y, &mut d), NilregStatus::Domain);
    }
}

#[test]
fn system_handle() {
    let cat = builtin();
    let mut sys = ptr::null_mut();
    unsafe {
        assert_eq!(
            nilreg_system_build(cat.0, c("N3").as_ptr(), c("K_ac").as_ptr(), 6, 0.75, 4, &mut sys),
            NilregStatus::Ok
        );
        let (mut n, mut j, mut id) = (0usize, 0i64, 0usize);
        assert_eq!(nilreg_system_shape(sys, &mut n, &mut j, &mut id), NilregStatus::Ok);
        assert!(n > 1 && j >= 4 && id < n);
        let mut k = 0usize;
        assert_eq!(nilreg_system_letter(sys, c("b").as_ptr(), &mut k), NilregStatus::Ok);
        assert_eq!(nilreg_system_letter(sys, c("z").as_ptr(), &mut k), NilregStatus::Catalog);
        assert_eq!(nilreg_system_letter(sys, c("e").as_ptr(), &mut k), NilregStatus::Ok);
        let (mut v2, mut j2, mut u2, mut der) = (0usize, 0i64, 0.0, 0.0);
        assert_eq!(
            nilreg_system_apply(sys, k, id, 0, 0.25, &mut v2, &mut j2, &mut u2, &mut der),
            NilregStatus::Ok
        );
        assert_eq!((v2, j2), (id, 0));
        assert!((u2 - 0.25).abs() < 1e-12 && (der - 1.0).abs() < 1e-12);
        let mut x = 0.0;
        assert_eq!(nilreg_system_position(sys, id, 0, 0.5, &mut x), NilregStatus::Ok);
        assert!(x > 0.0);
        assert_eq!(nilreg_system_position(sys, n, 0, 0.5, &mut x), NilregStatus::Domain);
        let mut kappa = 0.0;
        nilreg_system_letter(sys, c("b").as_ptr(), &mut k);
        assert_eq!(nilreg_system_holder(sys, k, id, 0.75, 8, &mut kappa), NilregStatus::Ok);
        assert!(kappa.is_finite() && kappa >= 0.0);
        let mut json = ptr::null_mut();
        assert_eq!(nilreg_system_json(sys, &mut json), NilregStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(json).to_str().unwrap()).unwrap();
        assert_eq!(v["params"]["group"], "N3");
        nilreg_string_free(json);
        nilreg_system_free(sys);
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/nilreg.h")).unwrap();
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for f in exports {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
}

/// Compiles `tests/smoke.c` against the generated header and the static library.
#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which("cc") else {
        eprintln!("no C compiler on PATH; skipping");
        return;
    };
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let lib = [deps, deps.parent().unwrap()]
        .iter()
        .map(|d| d.join("libnilreg_ffi.a"))
        .find(|p| p.exists())
        .expect("static library is built with the tests");
    let dir = tempfile_dir();
    let bin = dir.join("smoke");
    let dir_manifest = env!("CARGO_MANIFEST_DIR");
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(format!("{dir_manifest}/include"))
        .arg(format!("{dir_manifest}/tests/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).contains("unknown group"));
    std::fs::remove_dir_all(dir).unwrap();
}

fn which(name: &str) -> Result<std::path::PathBuf, ()> {
    std::env::var_os("PATH")
        .and_then(|p| std::env::split_paths(&p).map(|d| d.join(name)).find(|f| f.is_file()))
        .ok_or(())
}

fn tempfile_dir() -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("nilreg-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
