//! C ABI over `topogroup`.
//!
//! Lattices and topo-systems cross the boundary as opaque handles. Every fallible call
//! returns a [`TgStatus`] code and writes its result through an out-pointer; on failure
//! the message is kept per thread and read back with [`tg_last_error_message`].
//! Subsets of the group are passed as `uint64_t` bitmasks (bit `i` = element `i`).

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use topogroup::filters::{enumerate_ultrafilters, principal_filter};
use topogroup::group::{build_group, GroupDescriptor, DEFAULT_ORDER_CAP};
use topogroup::lattice::SubgroupLattice;
use topogroup::toposys::{build_toposys, TopoDescriptor, TopoSystem};

/// Result codes.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    /// A descriptor did not parse or named an unsupported group or system.
    InvalidDescriptor = 3,
    /// A subgroup index or element was out of range.
    OutOfRange = 4,
    /// The operation failed for a mathematical reason, e.g. a filter without the fip.
    Failed = 5,
    /// A bug: the library panicked. The handle arguments remain valid.
    Panic = 6,
}

/// Subgroup lattice of a finite group.
pub struct TgLattice {
    lattice: Arc<SubgroupLattice>,
}

/// Topo-system on a lattice. Holds its own reference to the lattice.
pub struct TgSystem {
    system: TopoSystem,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
}

struct Fail(TgStatus, String);

impl Fail {
    fn new(status: TgStatus, msg: impl ToString) -> Self {
        Fail(status, msg.to_string())
    }
}

/// Runs `f`, translating failures and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TgStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            TgStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(msg);
            TgStatus::Panic
        }
    }
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(Fail::new(TgStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail::new(TgStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail::new(TgStatus::NullArgument, format!("{what} is null")))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail::new(TgStatus::NullArgument, "output pointer is null"));
    }
    out.write(value);
    Ok(())
}

fn subgroup(l: &SubgroupLattice, index: usize) -> Result<usize, Fail> {
    l.check_index(index).map_err(|e| Fail::new(TgStatus::OutOfRange, e))
}

fn element(l: &SubgroupLattice, x: usize) -> Result<usize, Fail> {
    if x < l.group().order() {
        Ok(x)
    } else {
        Err(Fail::new(TgStatus::OutOfRange, format!("element {x} is out of range")))
    }
}

/// Builds the subgroup lattice of the group named by `descriptor` (e.g. `"sym:3"`).
/// Free the handle with [`tg_lattice_free`].
///
/// # Safety
/// `descriptor` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_lattice_new(descriptor: *const c_char, out: *mut *mut TgLattice) -> TgStatus {
    guard(|| {
        let d: GroupDescriptor = text(descriptor, "descriptor")?.parse().map_err(|e| Fail::new(TgStatus::InvalidDescriptor, e))?;
        let g = build_group(&d, DEFAULT_ORDER_CAP).map_err(|e| Fail::new(TgStatus::InvalidDescriptor, e))?;
        let h = Box::new(TgLattice { lattice: Arc::new(SubgroupLattice::enumerate(Arc::new(g))) });
        write(out, Box::into_raw(h))
    })
}

/// # Safety
/// `lattice` must come from [`tg_lattice_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tg_lattice_free(lattice: *mut TgLattice) {
    if !lattice.is_null() {
        drop(Box::from_raw(lattice));
    }
}

/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_lattice_group_order(lattice: *const TgLattice, out: *mut usize) -> TgStatus {
    guard(|| write(out, handle(lattice, "lattice")?.lattice.group().order()))
}

/// Number of subgroups.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_lattice_len(lattice: *const TgLattice, out: *mut usize) -> TgStatus {
    guard(|| write(out, handle(lattice, "lattice")?.lattice.len()))
}

/// Element bitmask of subgroup `index`.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_lattice_members(lattice: *const TgLattice, index: usize, out: *mut u64) -> TgStatus {
    guard(|| {
        let l = &handle(lattice, "lattice")?.lattice;
        write(out, l.members(subgroup(l, index)?).bits())
    })
}

/// Number of distinct subgroup ultrafilters.
///
/// # Safety
/// `lattice` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_ultrafilter_count(lattice: *const TgLattice, out: *mut usize) -> TgStatus {
    guard(|| {
        let l = &handle(lattice, "lattice")?.lattice;
        let n = enumerate_ultrafilters(l).map_err(|e| Fail::new(TgStatus::Failed, e))?.len();
        write(out, n)
    })
}

/// Builds a topo-system such as `"normal"` or `"generated:#1,#2"` on `lattice`.
/// Free the handle with [`tg_system_free`]; the lattice handle may be freed first.
///
/// # Safety
/// `lattice` must be a live handle, `descriptor` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tg_system_new(
    lattice: *const TgLattice,
    descriptor: *const c_char,
    out: *mut *mut TgSystem,
) -> TgStatus {
    guard(|| {
        let l = &handle(lattice, "lattice")?.lattice;
        let d: TopoDescriptor = text(descriptor, "descriptor")?.parse().map_err(|e| Fail::new(TgStatus::InvalidDescriptor, e))?;
        let system = build_toposys(l, &d).map_err(|e| Fail::new(TgStatus::InvalidDescriptor, e))?;
        write(out, Box::into_raw(Box::new(TgSystem { system })))
    })
}

/// # Safety
/// `system` must come from [`tg_system_new`] and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn tg_system_free(system: *mut TgSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Whether subgroup `index` is topen.
///
/// # Safety
/// `system` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_system_contains(system: *const TgSystem, index: usize, out: *mut bool) -> TgStatus {
    guard(|| {
        let t = &handle(system, "system")?.system;
        write(out, t.contains(subgroup(t.lattice(), index)?))
    })
}

/// # Safety
/// `system` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_system_is_hausdorff(system: *const TgSystem, out: *mut bool) -> TgStatus {
    guard(|| write(out, handle(system, "system")?.system.is_hausdorff().hausdorff))
}

/// Index of the interior of subgroup `index`.
///
/// # Safety
/// `system` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_system_interior(system: *const TgSystem, index: usize, out: *mut usize) -> TgStatus {
    guard(|| {
        let t = &handle(system, "system")?.system;
        write(out, t.interior(subgroup(t.lattice(), index)?))
    })
}

/// Index of the closure of subgroup `index`; its limit points go to `limits` unless that
/// is null.
///
/// # Safety
/// `system` must be a live handle; `out` must be writable; `limits` null or writable.
#[no_mangle]
pub unsafe extern "C" fn tg_system_closure(
    system: *const TgSystem,
    index: usize,
    out: *mut usize,
    limits: *mut u64,
) -> TgStatus {
    guard(|| {
        let t = &handle(system, "system")?.system;
        let (lim, closure) =
            t.closure_and_limits(subgroup(t.lattice(), index)?).map_err(|e| Fail::new(TgStatus::Failed, e))?;
        if !limits.is_null() {
            limits.write(lim.bits());
        }
        write(out, closure)
    })
}

/// Whether the ultrafilter of subgroups containing `generator` converges to `point`.
///
/// # Safety
/// `system` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tg_principal_converges(
    system: *const TgSystem,
    generator: usize,
    point: usize,
    out: *mut bool,
) -> TgStatus {
    guard(|| {
        let t = &handle(system, "system")?.system;
        let l = t.lattice();
        let f = principal_filter(l, element(l, generator)?).map_err(|e| Fail::new(TgStatus::Failed, e))?;
        let c = f.converges_to(t, element(l, point)?).map_err(|e| Fail::new(TgStatus::Failed, e))?;
        write(out, c.converges)
    })
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated, truncated
/// to `len`) and returns the full message length in bytes, excluding the NUL. Pass a null
/// `buf` to query the length.
///
/// # Safety
/// `buf` must be null or writable for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn tg_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            buf.add(n).write(0);
        }
        msg.len()
    })
}
