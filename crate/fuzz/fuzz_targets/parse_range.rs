#![no_main]

use dipole_cli::parse_range;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_range::<i32>(text) {
        assert!(r.0 <= r.1);
        assert_eq!(parse_range::<i32>(&r.to_string()).unwrap(), r);
    }
    if let Ok(r) = parse_range::<u32>(text) {
        assert!(r.0 <= r.1);
    }
});
