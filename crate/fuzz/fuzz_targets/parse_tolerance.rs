#![no_main]

use dipole_cli::config::Tolerances;
use dipole_cli::parse_tolerance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok((name, value)) = parse_tolerance(text) {
        assert!(value.is_finite() && value >= 0.0);
        let _ = Tolerances::default().set(&name, value);
    }
});
