//! C ABI for the pcsns simulator.
//!
//! Every fallible function returns a [`PcsnsStatus`]. On failure a message is
//! stored per thread and can be read with [`pcsns_last_error`]. Handles are
//! opaque; free them with the matching `*_free` function. Strings returned to
//! the caller must be released with [`pcsns_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use pcsns::harness::{presets, simulate, write_outputs, ExperimentConfig, Simulation};
use pcsns::num_complex::Complex64;
use pcsns::{derive_metrics, CodeConfig, Error, Mode, RadarParams, Target};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcsnsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ConfigError = 3,
    RuntimeError = 4,
    OutOfRange = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcsnsMode {
    Full = 0,
    Sns = 1,
    PcSns = 2,
}

impl From<PcsnsMode> for Mode {
    fn from(m: PcsnsMode) -> Self {
        match m {
            PcsnsMode::Full => Mode::Full,
            PcsnsMode::Sns => Mode::Sns,
            PcsnsMode::PcSns => Mode::PcSns,
        }
    }
}

impl From<Mode> for PcsnsMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Full => PcsnsMode::Full,
            Mode::Sns => PcsnsMode::Sns,
            Mode::PcSns => PcsnsMode::PcSns,
        }
    }
}

/// Opaque experiment configuration.
pub struct PcsnsConfig {
    inner: ExperimentConfig,
}

/// Opaque result of [`pcsns_run`].
pub struct PcsnsReport {
    sim: Simulation,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PcsnsMetrics {
    pub bandwidth_hz: f64,
    pub range_resolution_m: f64,
    pub r_max_m: f64,
    pub velocity_resolution_mps: f64,
    pub v_max_mps: f64,
    pub wavelength_m: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcsnsSummary {
    pub mode: PcsnsMode,
    pub l_c: usize,
    pub l_s: usize,
    pub r_u_m: f64,
    pub v_u_mps: f64,
    pub noise_floor_db: f64,
    pub pslr_db: f64,
    pub peak_count: usize,
    pub peaks_above_3db: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PcsnsPeak {
    pub range_bin: usize,
    pub doppler_bin: i64,
    pub range_m: f64,
    pub velocity_mps: f64,
    pub power_db: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> PcsnsStatus {
    if err.is_config_error() {
        PcsnsStatus::ConfigError
    } else {
        PcsnsStatus::RuntimeError
    }
}

/// Runs `f`, converting errors and panics into a status plus last-error message.
fn guard(f: impl FnOnce() -> Result<(), (PcsnsStatus, String)>) -> PcsnsStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PcsnsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PcsnsStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (PcsnsStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (PcsnsStatus, String) {
    (PcsnsStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (PcsnsStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (PcsnsStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn cfg_mut<'a>(cfg: *mut PcsnsConfig) -> Result<&'a mut ExperimentConfig, (PcsnsStatus, String)> {
    cfg.as_mut().map(|c| &mut c.inner).ok_or_else(|| null("config"))
}

fn boxed_config(inner: ExperimentConfig, out: *mut *mut PcsnsConfig) {
    unsafe { *out = Box::into_raw(Box::new(PcsnsConfig { inner })) };
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn pcsns_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pcsns_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pcsns_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a configuration from a built-in preset name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pcsns_config_from_preset(name: *const c_char, out: *mut *mut PcsnsConfig) -> PcsnsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = read_str(name, "name")?;
        boxed_config(presets::preset(name).map_err(lib_err)?, out);
        Ok(())
    })
}

/// Parses and validates a TOML configuration.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pcsns_config_from_toml(text: *const c_char, out: *mut *mut PcsnsConfig) -> PcsnsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(text, "text")?;
        boxed_config(ExperimentConfig::from_toml_str(text).map_err(lib_err)?, out);
        Ok(())
    })
}

/// Serialises a configuration to TOML. Free the result with [`pcsns_string_free`].
///
/// # Safety
/// `cfg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pcsns_config_to_toml(cfg: *const PcsnsConfig, out: *mut *mut c_char) -> PcsnsStatus {
    guard(|| {
        let cfg = cfg.as_ref().ok_or_else(|| null("config"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = cfg.inner.to_toml_string().map_err(lib_err)?;
        *out = CString::new(text).map_err(|e| (PcsnsStatus::RuntimeError, e.to_string()))?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `cfg` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pcsns_config_free(cfg: *mut PcsnsConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcsns_config_set_mode(cfg: *mut PcsnsConfig, mode: PcsnsMode) -> PcsnsStatus {
    guard(|| {
        cfg_mut(cfg)?.mode = mode.into();
        Ok(())
    })
}

/// Sets the code split. Consistency with the mode is checked by [`pcsns_config_validate`] and [`pcsns_run`].
///
/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcsns_config_set_code(cfg: *mut PcsnsConfig, l_c: usize, l_s: usize) -> PcsnsStatus {
    guard(|| {
        let code = CodeConfig::new(l_c, l_s).map_err(lib_err)?;
        cfg_mut(cfg)?.code = code;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcsns_config_set_noise(cfg: *mut PcsnsConfig, noise_power: f64, noise_seed: u64) -> PcsnsStatus {
    guard(|| {
        let c = cfg_mut(cfg)?;
        c.scenario.noise_power = noise_power;
        c.seeds.noise = noise_seed;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcsns_config_set_symbol_seed(cfg: *mut PcsnsConfig, seed: u64) -> PcsnsStatus {
    guard(|| {
        cfg_mut(cfg)?.seeds.symbols = seed;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcsns_config_clear_targets(cfg: *mut PcsnsConfig) -> PcsnsStatus {
    guard(|| {
        cfg_mut(cfg)?.scenario.targets.clear();
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcsns_config_add_target(
    cfg: *mut PcsnsConfig,
    range_m: f64,
    velocity_mps: f64,
    amplitude_re: f64,
    amplitude_im: f64,
) -> PcsnsStatus {
    guard(|| {
        let t = Target::new(range_m, velocity_mps).with_amplitude(Complex64::new(amplitude_re, amplitude_im));
        t.validate().map_err(lib_err)?;
        cfg_mut(cfg)?.scenario.targets.push(t);
        Ok(())
    })
}

/// Sets the output directory and switches all file outputs on or off.
///
/// # Safety
/// `cfg` must be a live handle; `dir` may be NULL to keep the current directory.
#[no_mangle]
pub unsafe extern "C" fn pcsns_config_set_output(cfg: *mut PcsnsConfig, dir: *const c_char, write_files: bool) -> PcsnsStatus {
    guard(|| {
        let dir = if dir.is_null() { None } else { Some(PathBuf::from(read_str(dir, "dir")?)) };
        let c = cfg_mut(cfg)?;
        if let Some(d) = dir {
            c.output.dir = d;
        }
        c.output.csv = write_files;
        c.output.plots = write_files;
        c.output.report = write_files;
        Ok(())
    })
}

/// # Safety
/// `cfg` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pcsns_config_validate(cfg: *const PcsnsConfig) -> PcsnsStatus {
    guard(|| cfg.as_ref().ok_or_else(|| null("config"))?.inner.validate().map_err(lib_err))
}

/// Runs the configured experiment and writes the enabled outputs.
///
/// # Safety
/// `cfg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pcsns_run(cfg: *const PcsnsConfig, out: *mut *mut PcsnsReport) -> PcsnsStatus {
    guard(|| {
        let cfg = &cfg.as_ref().ok_or_else(|| null("config"))?.inner;
        if out.is_null() {
            return Err(null("out"));
        }
        let sim = simulate(cfg).map_err(lib_err)?;
        write_outputs(cfg, &sim).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(PcsnsReport { sim }));
        Ok(())
    })
}

/// # Safety
/// `report` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pcsns_report_free(report: *mut PcsnsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pcsns_report_summary(report: *const PcsnsReport, out: *mut PcsnsSummary) -> PcsnsStatus {
    guard(|| {
        let s = &report.as_ref().ok_or_else(|| null("report"))?.sim.summary;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = PcsnsSummary {
            mode: s.mode.into(),
            l_c: s.l_c,
            l_s: s.l_s,
            r_u_m: s.r_u_m,
            v_u_mps: s.v_u_mps,
            noise_floor_db: s.noise_floor_db,
            pslr_db: s.pslr_db,
            peak_count: s.peak_count,
            peaks_above_3db: s.peaks_above_3db,
        };
        Ok(())
    })
}

/// Peak `index` in descending power order.
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pcsns_report_peak(report: *const PcsnsReport, index: usize, out: *mut PcsnsPeak) -> PcsnsStatus {
    guard(|| {
        let peaks = &report.as_ref().ok_or_else(|| null("report"))?.sim.peaks.peaks;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = peaks
            .get(index)
            .ok_or_else(|| (PcsnsStatus::OutOfRange, format!("peak index {index} out of range 0..{}", peaks.len())))?;
        *out = PcsnsPeak {
            range_bin: p.range_bin,
            doppler_bin: p.doppler_bin,
            range_m: p.range,
            velocity_mps: p.velocity,
            power_db: p.power_db,
        };
        Ok(())
    })
}

/// Dimensions of the range-Doppler map (range bins × Doppler bins).
///
/// # Safety
/// `report` must be a live handle; `rows` and `cols` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn pcsns_report_map_dims(report: *const PcsnsReport, rows: *mut usize, cols: *mut usize) -> PcsnsStatus {
    guard(|| {
        let map = &report.as_ref().ok_or_else(|| null("report"))?.sim.map;
        let rows = rows.as_mut().ok_or_else(|| null("rows"))?;
        let cols = cols.as_mut().ok_or_else(|| null("cols"))?;
        *rows = map.rows();
        *cols = map.cols();
        Ok(())
    })
}

/// Copies the linear map power, row-major, into `buf` of `len` doubles.
/// `len` must equal rows × cols.
///
/// # Safety
/// `report` must be a live handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn pcsns_report_map_power(report: *const PcsnsReport, buf: *mut f64, len: usize) -> PcsnsStatus {
    guard(|| {
        let map = &report.as_ref().ok_or_else(|| null("report"))?.sim.map;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let power = map.power();
        if len != power.len() {
            return Err((PcsnsStatus::OutOfRange, format!("buffer holds {len} values, map has {}", power.len())));
        }
        std::slice::from_raw_parts_mut(buf, len).copy_from_slice(power);
        Ok(())
    })
}

/// Radar figures of merit for a numerology.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pcsns_derive_metrics(
    n_subcarriers: usize,
    n_symbols: usize,
    subcarrier_spacing_hz: f64,
    carrier_freq_hz: f64,
    cp_duration_s: f64,
    speed_of_light_mps: f64,
    out: *mut PcsnsMetrics,
) -> PcsnsStatus {
    guard(|| {
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let params = RadarParams::new(n_subcarriers, n_symbols, subcarrier_spacing_hz, carrier_freq_hz, cp_duration_s)
            .and_then(|p| p.with_speed_of_light(speed_of_light_mps))
            .map_err(lib_err)?;
        let m = derive_metrics(&params);
        *out = PcsnsMetrics {
            bandwidth_hz: m.bandwidth,
            range_resolution_m: m.range_resolution,
            r_max_m: m.r_max,
            velocity_resolution_mps: m.velocity_resolution,
            v_max_mps: m.v_max,
            wavelength_m: m.wavelength,
        };
        Ok(())
    })
}
