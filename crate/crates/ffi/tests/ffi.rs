//! Exercises the C entry points from Rust, including the error paths
//! a foreign caller can hit.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::Path;
use std::ptr;

use arq_ffi::{
    arq_check_quiver, arq_component_export_tq, arq_component_free, arq_component_knit,
    arq_component_level, arq_component_module_count, arq_component_module_name,
    arq_component_rad_dim, arq_component_verify, arq_covering_build, arq_covering_compose_degree,
    arq_covering_cover_size, arq_covering_free, arq_covering_verify, arq_last_error,
    arq_string_free, arq_version, ArqComponent, ArqCovering, ArqStatus,
};

const A3_ALG: &str = "vertex 1\nvertex 2\nvertex 3\narrow a : 1 -> 2\narrow b : 2 -> 3\n";

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(arq_last_error()).to_string_lossy().into_owned() }
}

fn take_string(ptr: *mut c_char) -> String {
    assert!(!ptr.is_null());
    let s = unsafe { CStr::from_ptr(ptr).to_string_lossy().into_owned() };
    unsafe { arq_string_free(ptr) };
    s
}

fn knit_a3(field: &str) -> *mut ArqComponent {
    let alg = c(A3_ALG);
    let field = c(field);
    let mut handle: *mut ArqComponent = ptr::null_mut();
    let status = unsafe { arq_component_knit(alg.as_ptr(), field.as_ptr(), &mut handle) };
    assert_eq!(status, ArqStatus::Ok, "{}", last_error());
    assert!(!handle.is_null());
    handle
}

#[test]
fn version_is_a_static_string() {
    let v = unsafe { CStr::from_ptr(arq_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn knit_queries_roundtrip() {
    let comp = knit_a3("q");

    let mut count = 0usize;
    let status = unsafe { arq_component_module_count(comp, &mut count) };
    assert_eq!(status, ArqStatus::Ok);
    assert_eq!(count, 6);

    let mut names = Vec::new();
    for i in 0..count {
        let mut out: *mut c_char = ptr::null_mut();
        let status = unsafe { arq_component_module_name(comp, i, &mut out) };
        assert_eq!(status, ArqStatus::Ok);
        names.push(take_string(out));
    }
    assert!(names.contains(&"m0_0_1".to_string()));
    assert!(names.contains(&"m1_1_1".to_string()));
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);

    let m = c("m1_1_1");
    let mut level = -1i64;
    let status = unsafe { arq_component_level(comp, m.as_ptr(), &mut level) };
    assert_eq!(status, ArqStatus::Ok);
    assert_eq!(level, 2);

    // Hom(m0_0_1, m1_1_1) is one dimensional, spanned by a composite of
    // two irreducibles, so it survives radical powers up to two.
    let x = c("m0_0_1");
    let y = c("m1_1_1");
    for (n, expect) in [(0usize, 1usize), (1, 1), (2, 1), (3, 0), (4, 0)] {
        let mut dim = usize::MAX;
        let status = unsafe { arq_component_rad_dim(comp, x.as_ptr(), y.as_ptr(), n, &mut dim) };
        assert_eq!(status, ArqStatus::Ok, "{}", last_error());
        assert_eq!(dim, expect, "rad^{n}");
    }

    assert_eq!(unsafe { arq_component_verify(comp) }, ArqStatus::Ok);

    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { arq_component_export_tq(comp, &mut out) };
    assert_eq!(status, ArqStatus::Ok);
    let tq = take_string(out);
    assert!(tq.contains("vertex m0_0_1"));
    assert!(tq.contains("tau"));

    unsafe { arq_component_free(comp) };
}

#[test]
fn knit_over_a_prime_field() {
    let comp = knit_a3("f101");
    let mut count = 0usize;
    assert_eq!(unsafe { arq_component_module_count(comp, &mut count) }, ArqStatus::Ok);
    assert_eq!(count, 6);
    assert_eq!(unsafe { arq_component_verify(comp) }, ArqStatus::Ok);
    unsafe { arq_component_free(comp) };
}

#[test]
fn knit_error_paths() {
    let alg = c(A3_ALG);
    let field = c("q");
    let mut handle: *mut ArqComponent = ptr::null_mut();

    let status = unsafe { arq_component_knit(ptr::null(), field.as_ptr(), &mut handle) };
    assert_eq!(status, ArqStatus::NullPointer);
    assert!(last_error().contains("alg_text"));

    let status = unsafe { arq_component_knit(alg.as_ptr(), field.as_ptr(), ptr::null_mut()) };
    assert_eq!(status, ArqStatus::NullPointer);

    let bad_field = c("f4");
    let status = unsafe { arq_component_knit(alg.as_ptr(), bad_field.as_ptr(), &mut handle) };
    assert_eq!(status, ArqStatus::ParseError);
    assert!(last_error().contains('4'), "{}", last_error());

    let bad_alg = c("vertex 1\narrow a : 1 -> 9\n");
    let status = unsafe { arq_component_knit(bad_alg.as_ptr(), field.as_ptr(), &mut handle) };
    assert_eq!(status, ArqStatus::ParseError);

    let not_utf8: [c_char; 3] = [-1i8 as c_char, -2i8 as c_char, 0];
    let status = unsafe { arq_component_knit(not_utf8.as_ptr(), field.as_ptr(), &mut handle) };
    assert_eq!(status, ArqStatus::InvalidUtf8);
    assert!(last_error().contains("UTF-8"));
}

#[test]
fn component_query_error_paths() {
    let comp = knit_a3("q");

    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { arq_component_module_name(comp, 99, &mut out) };
    assert_eq!(status, ArqStatus::DomainError);
    assert!(last_error().contains("99"));

    let ghost = c("nosuch");
    let mut level = 0i64;
    let status = unsafe { arq_component_level(comp, ghost.as_ptr(), &mut level) };
    assert_eq!(status, ArqStatus::DomainError);
    assert!(last_error().contains("nosuch"));

    let x = c("m0_0_1");
    let mut dim = 0usize;
    let status = unsafe { arq_component_rad_dim(comp, x.as_ptr(), ghost.as_ptr(), 1, &mut dim) };
    assert_eq!(status, ArqStatus::DomainError);

    unsafe { arq_component_free(comp) };
    unsafe { arq_component_free(ptr::null_mut()) };
}

#[test]
fn check_quiver_statuses() {
    let good = c("vertex a proj\nvertex b proj inj\nvertex c inj\narrow a b\narrow b c\ntau c -> a\n");
    assert_eq!(unsafe { arq_check_quiver(good.as_ptr()) }, ArqStatus::Ok);

    // tau b -> a forces a sigma arrow a -> a that the text never declares.
    let bad = c("vertex a proj\nvertex b\narrow a b\ntau b -> a\n");
    assert_eq!(unsafe { arq_check_quiver(bad.as_ptr()) }, ArqStatus::DomainError);
    assert!(!last_error().is_empty());

    let garbage = c("vertex\n");
    assert_eq!(unsafe { arq_check_quiver(garbage.as_ptr()) }, ArqStatus::ParseError);

    assert_eq!(unsafe { arq_check_quiver(ptr::null()) }, ArqStatus::NullPointer);
}

fn build_a3_covering(radius: usize) -> *mut ArqCovering {
    let alg = c(A3_ALG);
    let field = c("q");
    let mut handle: *mut ArqCovering = ptr::null_mut();
    let status = unsafe { arq_covering_build(alg.as_ptr(), field.as_ptr(), radius, &mut handle) };
    assert_eq!(status, ArqStatus::Ok, "{}", last_error());
    assert!(!handle.is_null());
    handle
}

#[test]
fn covering_verification_roundtrip() {
    let cov = build_a3_covering(10);

    let mut vertices = 0usize;
    let mut interior = 0usize;
    let status = unsafe { arq_covering_cover_size(cov, &mut vertices, &mut interior) };
    assert_eq!(status, ArqStatus::Ok);
    // The AR quiver of A_3 is finite and simply connected, so the cover
    // at radius 10 reproduces it and everything is interior.
    assert_eq!(vertices, 6);
    assert_eq!(interior, 6);

    let mut pairs = 0usize;
    let mut undecidable = 0usize;
    let status = unsafe { arq_covering_verify(cov, &mut pairs, &mut undecidable) };
    assert_eq!(status, ArqStatus::Ok, "{}", last_error());
    assert_eq!(pairs, 36);
    assert_eq!(undecidable, 0);

    unsafe { arq_covering_free(cov) };
}

#[test]
fn compose_degree_over_the_boundary() {
    let cov = build_a3_covering(10);

    let spec = c("m0_0_1 > m0_1_1 > m1_1_1");
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { arq_covering_compose_degree(cov, spec.as_ptr(), &mut out) };
    assert_eq!(status, ArqStatus::Ok, "{}", last_error());
    let text = take_string(out);
    assert!(text.starts_with("verdict NotInRadNPlus1"), "{text}");

    let perturbed = c("m0_0_1 > m0_1_1 > m1_1_1 perturb 1");
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { arq_covering_compose_degree(cov, perturbed.as_ptr(), &mut out) };
    assert_eq!(status, ArqStatus::Ok, "{}", last_error());
    let text = take_string(out);
    assert!(text.starts_with("verdict"), "{text}");

    let malformed = c("m0_0_1");
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { arq_covering_compose_degree(cov, malformed.as_ptr(), &mut out) };
    assert_eq!(status, ArqStatus::ParseError);

    let unknown = c("m0_0_1 > ghost");
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { arq_covering_compose_degree(cov, unknown.as_ptr(), &mut out) };
    assert_eq!(status, ArqStatus::DomainError);
    assert!(last_error().contains("ghost"));

    unsafe { arq_covering_free(cov) };
    unsafe { arq_covering_free(ptr::null_mut()) };
}

#[test]
fn header_is_generated_with_the_build() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/arq.h");
    let text = std::fs::read_to_string(header).expect("build script wrote include/arq.h");
    assert!(text.contains("ARQ_STATUS_OK"));
    assert!(text.contains("typedef struct ArqComponent ArqComponent;"));
    assert!(text.contains("arq_covering_compose_degree"));
}
