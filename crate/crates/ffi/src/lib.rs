//! C bindings for the toolkit. Handles are opaque boxes owning their
//! data; every fallible call returns an `ArqStatus` and routes failure
//! detail through a thread-local message readable with `arq_last_error`.
//! Panics are caught at the boundary and surface as `ArqStatus::Panic`.
//!
//! Strings handed out through `*mut c_char` out parameters are heap
//! allocated and must be released with `arq_string_free`.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use arq::algfile;
use arq::cli::parse_path_spec;
use arq::cover::{universal_cover, TruncatedCover};
use arq::field::{Field, GroundField, PrimeField, Rationals};
use arq::knit::{knit, Component};
use arq::meshcat::MeshError;
use arq::quiver::VertexId;
use arq::tqfile;
use arq::wellbehaved::{
    build_well_behaved, check_generalized_standard, composite_degree, verify_graded_covering,
    verify_injectivity, WbError, DEFAULT_PATH_CAP,
};

/// Result code of every fallible call. Anything but `Ok` leaves a
/// description in `arq_last_error`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ArqStatus {
    Ok = 0,
    /// Input text or arguments did not parse.
    ParseError = 1,
    /// The computation ran and a mathematical check failed.
    DomainError = 2,
    NullPointer = 3,
    InvalidUtf8 = 4,
    /// An internal panic was caught at the boundary.
    Panic = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: ArqStatus, msg: impl AsRef<str>) -> ArqStatus {
    let sanitized = msg.as_ref().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("nul bytes stripped");
    });
    status
}

fn guarded(f: impl FnOnce() -> ArqStatus) -> ArqStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(ArqStatus::Panic, "internal panic crossed the boundary"),
    }
}

macro_rules! ffi_try {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, ArqStatus> {
    if ptr.is_null() {
        return Err(fail(ArqStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(ArqStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), ArqStatus> {
    if out.is_null() {
        return Err(fail(ArqStatus::NullPointer, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String, what: &str) -> Result<(), ArqStatus> {
    let c = CString::new(s.replace('\0', " ")).expect("nul bytes stripped");
    write_out(out, c.into_raw(), what)
}

unsafe fn deref<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, ArqStatus> {
    ptr.as_ref()
        .ok_or_else(|| fail(ArqStatus::NullPointer, format!("{what} is null")))
}

/// Version of the library as a static string; never freed.
#[no_mangle]
pub extern "C" fn arq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Description of the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread; do not
/// free it.
#[no_mangle]
pub extern "C" fn arq_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string obtained from any `arq_*` out parameter.
#[no_mangle]
pub unsafe extern "C" fn arq_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Validates translation quiver text: `Ok` when it parses and satisfies
/// the axioms, `DomainError` with the violation list otherwise.
#[no_mangle]
pub unsafe extern "C" fn arq_check_quiver(tq_text: *const c_char) -> ArqStatus {
    guarded(|| {
        let text = ffi_try!(read_str(tq_text, "tq_text"));
        let file = match tqfile::parse(text) {
            Ok(f) => f,
            Err(e) => return fail(ArqStatus::ParseError, e.to_string()),
        };
        let report = file.quiver.validate();
        if report.is_valid() {
            ArqStatus::Ok
        } else {
            let lines: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
            fail(ArqStatus::DomainError, lines.join("\n"))
        }
    })
}

enum FieldComponent {
    Rational(Component<Rationals>),
    Prime(Component<PrimeField>),
}

/// A knitted Auslander-Reiten component over one ground field.
pub struct ArqComponent {
    inner: FieldComponent,
}

macro_rules! with_component {
    ($handle:expr, $comp:ident => $body:expr) => {
        match &$handle.inner {
            FieldComponent::Rational($comp) => $body,
            FieldComponent::Prime($comp) => $body,
        }
    };
}

fn knit_from_text(alg_text: &str, field: &str) -> Result<FieldComponent, ArqStatus> {
    let spec =
        algfile::parse(alg_text).map_err(|e| fail(ArqStatus::ParseError, e.to_string()))?;
    let ground =
        GroundField::from_str(field).map_err(|e| fail(ArqStatus::ParseError, e.to_string()))?;
    match ground {
        GroundField::Rationals => knit(&spec, Rationals)
            .map(FieldComponent::Rational)
            .map_err(|e| fail(ArqStatus::DomainError, e.to_string())),
        GroundField::Prime(p) => {
            let f = PrimeField::new(p).map_err(|e| fail(ArqStatus::ParseError, e))?;
            knit(&spec, f)
                .map(FieldComponent::Prime)
                .map_err(|e| fail(ArqStatus::DomainError, e.to_string()))
        }
    }
}

/// Knits the component of the path algebra described by `alg_text` over
/// `field` (`"q"` or `"f<p>"`) and stores a fresh handle in `out`.
#[no_mangle]
pub unsafe extern "C" fn arq_component_knit(
    alg_text: *const c_char,
    field: *const c_char,
    out: *mut *mut ArqComponent,
) -> ArqStatus {
    guarded(|| {
        let text = ffi_try!(read_str(alg_text, "alg_text"));
        let field = ffi_try!(read_str(field, "field"));
        let inner = ffi_try!(knit_from_text(text, field));
        let handle = Box::into_raw(Box::new(ArqComponent { inner }));
        ffi_try!(write_out(out, handle, "out"));
        ArqStatus::Ok
    })
}

/// Releases a component handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn arq_component_free(handle: *mut ArqComponent) {
    if !handle.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(handle))));
    }
}

/// Number of indecomposable modules in the component.
#[no_mangle]
pub unsafe extern "C" fn arq_component_module_count(
    handle: *const ArqComponent,
    out: *mut usize,
) -> ArqStatus {
    guarded(|| {
        let comp = ffi_try!(deref(handle, "component"));
        let count = with_component!(comp, c => c.modules().len());
        ffi_try!(write_out(out, count, "out"));
        ArqStatus::Ok
    })
}

/// Name of the module at `index` in sorted order. The string must be
/// released with `arq_string_free`.
#[no_mangle]
pub unsafe extern "C" fn arq_component_module_name(
    handle: *const ArqComponent,
    index: usize,
    out: *mut *mut c_char,
) -> ArqStatus {
    guarded(|| {
        let comp = ffi_try!(deref(handle, "component"));
        let name = with_component!(comp, c => c.modules().keys().nth(index).cloned());
        match name {
            Some(name) => {
                ffi_try!(write_string(out, name, "out"));
                ArqStatus::Ok
            }
            None => fail(ArqStatus::DomainError, format!("module index {index} out of range")),
        }
    })
}

/// Knitting level of the named module.
#[no_mangle]
pub unsafe extern "C" fn arq_component_level(
    handle: *const ArqComponent,
    module: *const c_char,
    out: *mut i64,
) -> ArqStatus {
    guarded(|| {
        let comp = ffi_try!(deref(handle, "component"));
        let module = ffi_try!(read_str(module, "module"));
        match with_component!(comp, c => c.level(module)) {
            Some(level) => {
                ffi_try!(write_out(out, level, "out"));
                ArqStatus::Ok
            }
            None => fail(ArqStatus::DomainError, format!("unknown module `{module}`")),
        }
    })
}

/// Dimension of the n-th radical power of Hom(x, y); `n = 0` is the full
/// hom space.
#[no_mangle]
pub unsafe extern "C" fn arq_component_rad_dim(
    handle: *const ArqComponent,
    x: *const c_char,
    y: *const c_char,
    n: usize,
    out: *mut usize,
) -> ArqStatus {
    guarded(|| {
        let comp = ffi_try!(deref(handle, "component"));
        let x = ffi_try!(read_str(x, "x"));
        let y = ffi_try!(read_str(y, "y"));
        match with_component!(comp, c => c.rad_power_space(x, y, n).map(|s| s.dim())) {
            Ok(dim) => {
                ffi_try!(write_out(out, dim, "out"));
                ArqStatus::Ok
            }
            Err(e) => fail(ArqStatus::DomainError, e.to_string()),
        }
    })
}

fn component_certificates<K: Field>(comp: &Component<K>) -> Result<(), String> {
    comp.verify_component().map_err(|e| e.to_string())?;
    for x in comp.modules().keys() {
        if !comp.ar_quiver().is_injective(&VertexId::new(x.clone())) {
            comp.verify_almost_split(x).map_err(|e| e.to_string())?;
        }
    }
    Ok(())
}

/// Re-derives every certificate of the component: arrow multiplicities
/// against rad/rad^2 and the full almost split factorization checks.
#[no_mangle]
pub unsafe extern "C" fn arq_component_verify(handle: *const ArqComponent) -> ArqStatus {
    guarded(|| {
        let comp = ffi_try!(deref(handle, "component"));
        match with_component!(comp, c => component_certificates(c)) {
            Ok(()) => ArqStatus::Ok,
            Err(msg) => fail(ArqStatus::DomainError, msg),
        }
    })
}

/// Serializes the AR quiver of the component as translation quiver text.
/// The string must be released with `arq_string_free`.
#[no_mangle]
pub unsafe extern "C" fn arq_component_export_tq(
    handle: *const ArqComponent,
    out: *mut *mut c_char,
) -> ArqStatus {
    guarded(|| {
        let comp = ffi_try!(deref(handle, "component"));
        let text = with_component!(comp, c => c.export_tq());
        ffi_try!(write_string(out, text, "out"));
        ArqStatus::Ok
    })
}

enum FieldCovering {
    Rational {
        comp: Component<Rationals>,
        tc: TruncatedCover,
    },
    Prime {
        comp: Component<PrimeField>,
        tc: TruncatedCover,
    },
}

/// A knitted component together with the truncated universal cover of its
/// AR quiver, rooted at the first module.
pub struct ArqCovering {
    inner: FieldCovering,
}

macro_rules! with_covering {
    ($handle:expr, $comp:ident, $tc:ident => $body:expr) => {
        match &$handle.inner {
            FieldCovering::Rational { comp: $comp, tc: $tc } => $body,
            FieldCovering::Prime { comp: $comp, tc: $tc } => $body,
        }
    };
}

fn cover_component<K: Field>(comp: &Component<K>, radius: usize) -> Result<TruncatedCover, ArqStatus> {
    let root = comp
        .modules()
        .keys()
        .next()
        .expect("knitted component is nonempty")
        .clone();
    universal_cover(comp.ar_quiver(), &VertexId::new(root), radius)
        .map_err(|e| fail(ArqStatus::DomainError, e.to_string()))
}

/// Knits the component for `alg_text` over `field` and builds the
/// radius-`radius` universal cover of its AR quiver.
#[no_mangle]
pub unsafe extern "C" fn arq_covering_build(
    alg_text: *const c_char,
    field: *const c_char,
    radius: usize,
    out: *mut *mut ArqCovering,
) -> ArqStatus {
    guarded(|| {
        let text = ffi_try!(read_str(alg_text, "alg_text"));
        let field = ffi_try!(read_str(field, "field"));
        let inner = match ffi_try!(knit_from_text(text, field)) {
            FieldComponent::Rational(comp) => {
                let tc = ffi_try!(cover_component(&comp, radius));
                FieldCovering::Rational { comp, tc }
            }
            FieldComponent::Prime(comp) => {
                let tc = ffi_try!(cover_component(&comp, radius));
                FieldCovering::Prime { comp, tc }
            }
        };
        let handle = Box::into_raw(Box::new(ArqCovering { inner }));
        ffi_try!(write_out(out, handle, "out"));
        ArqStatus::Ok
    })
}

/// Releases a covering handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn arq_covering_free(handle: *mut ArqCovering) {
    if !handle.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(handle))));
    }
}

/// Vertex count of the truncated cover and size of its interior.
#[no_mangle]
pub unsafe extern "C" fn arq_covering_cover_size(
    handle: *const ArqCovering,
    out_vertices: *mut usize,
    out_interior: *mut usize,
) -> ArqStatus {
    guarded(|| {
        let cov = ffi_try!(deref(handle, "covering"));
        let (v, i) = with_covering!(cov, _comp, tc => {
            (tc.cover.vertex_count(), tc.interior.len())
        });
        ffi_try!(write_out(out_vertices, v, "out_vertices"));
        ffi_try!(write_out(out_interior, i, "out_interior"));
        ArqStatus::Ok
    })
}

fn undecidable(e: &WbError) -> bool {
    matches!(e, WbError::UndecidableTruncation { .. })
        || matches!(e, WbError::Mesh(MeshError::UndecidableTruncation { .. }))
}

fn covering_suite<K: Field>(
    comp: &Component<K>,
    tc: &TruncatedCover,
) -> Result<(usize, usize), (ArqStatus, String)> {
    let dom = |e: &dyn std::fmt::Display| (ArqStatus::DomainError, e.to_string());
    let fb = build_well_behaved(tc, comp).map_err(|e| dom(&e))?;
    let ctx = fb.mesh_ctx(DEFAULT_PATH_CAP).map_err(|e| dom(&e))?;
    if !check_generalized_standard(comp).map_err(|e| dom(&e))? {
        return Err((
            ArqStatus::DomainError,
            "radical chain does not vanish".to_string(),
        ));
    }
    let levels = comp.levels();
    let span = levels.values().max().unwrap() - levels.values().min().unwrap();
    let nmax = span as usize + 1;
    let cover_vertices: Vec<VertexId> = tc.cover.vertices().cloned().collect();
    let mut pairs = 0usize;
    let mut skipped = 0usize;
    for x in &cover_vertices {
        for y in comp.modules().keys() {
            match verify_injectivity(&fb, &ctx, x, y) {
                Ok(ir) if !ir.injective() => {
                    return Err((
                        ArqStatus::DomainError,
                        format!("hom map at ({x}, {y}) is not injective"),
                    ))
                }
                Ok(_) => {}
                Err(e) if undecidable(&e) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(dom(&e)),
            }
            let mut decidable = true;
            for n in 0..=nmax {
                match verify_graded_covering(&fb, &ctx, x, y, n) {
                    Ok(gr) if !gr.bijective() => {
                        return Err((
                            ArqStatus::DomainError,
                            format!("degree {n} map at ({x}, {y}) is not bijective"),
                        ))
                    }
                    Ok(_) => {}
                    Err(e) if undecidable(&e) => {
                        decidable = false;
                        break;
                    }
                    Err(e) => return Err(dom(&e)),
                }
            }
            if decidable {
                pairs += 1;
            } else {
                skipped += 1;
            }
        }
    }
    Ok((pairs, skipped))
}

/// Checks the graded covering bijections and generalized standardness on
/// the cover. `out_pairs` receives the number of fully verified pairs,
/// `out_undecidable` the pairs skipped for exceeding the truncation.
#[no_mangle]
pub unsafe extern "C" fn arq_covering_verify(
    handle: *const ArqCovering,
    out_pairs: *mut usize,
    out_undecidable: *mut usize,
) -> ArqStatus {
    guarded(|| {
        let cov = ffi_try!(deref(handle, "covering"));
        match with_covering!(cov, comp, tc => covering_suite(comp, tc)) {
            Ok((pairs, skipped)) => {
                ffi_try!(write_out(out_pairs, pairs, "out_pairs"));
                ffi_try!(write_out(out_undecidable, skipped, "out_undecidable"));
                ArqStatus::Ok
            }
            Err((status, msg)) => fail(status, msg),
        }
    })
}

fn compose_suite<K: Field>(
    comp: &Component<K>,
    tc: &TruncatedCover,
    spec: &str,
) -> Result<String, (ArqStatus, String)> {
    let dom = |e: &dyn std::fmt::Display| (ArqStatus::DomainError, e.to_string());
    let (vertices, perturb) =
        parse_path_spec(spec).map_err(|m| (ArqStatus::ParseError, m))?;
    let fb = build_well_behaved(tc, comp).map_err(|e| dom(&e))?;
    let ctx = fb.mesh_ctx(DEFAULT_PATH_CAP).map_err(|e| dom(&e))?;
    let mut morphs = Vec::new();
    for w in vertices.windows(2) {
        let m = comp.irr_morphism(&w[0], &w[1]).ok_or_else(|| {
            (
                ArqStatus::DomainError,
                format!("no irreducible morphism {} -> {}", w[0], w[1]),
            )
        })?;
        morphs.push(m.clone());
    }
    if let Some(i) = perturb {
        if let Some(delta) = comp
            .rad_square_perturbation(&vertices[i - 1], &vertices[i])
            .map_err(|e| dom(&e))?
        {
            morphs[i - 1] = morphs[i - 1].add(&delta);
        }
    }
    let names: Vec<&str> = vertices.iter().map(String::as_str).collect();
    let verdict = composite_degree(&fb, &ctx, &names, &morphs, true).map_err(|e| dom(&e))?;
    Ok(verdict.render())
}

/// Decides the radical degree of a composite along `path_spec`, written
/// `X1 > X2 > ... [perturb i]` with component module names. The rendered
/// verdict goes to `out`; release it with `arq_string_free`.
#[no_mangle]
pub unsafe extern "C" fn arq_covering_compose_degree(
    handle: *const ArqCovering,
    path_spec: *const c_char,
    out: *mut *mut c_char,
) -> ArqStatus {
    guarded(|| {
        let cov = ffi_try!(deref(handle, "covering"));
        let spec = ffi_try!(read_str(path_spec, "path_spec"));
        match with_covering!(cov, comp, tc => compose_suite(comp, tc, spec)) {
            Ok(text) => {
                ffi_try!(write_string(out, text, "out"));
                ArqStatus::Ok
            }
            Err((status, msg)) => fail(status, msg),
        }
    })
}
