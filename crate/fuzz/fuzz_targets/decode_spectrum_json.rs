#![no_main]

use dipole_cli::parse_spectrum_json;
use dipole_cli::table::{SpectrumDocument, SpectrumRecord};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(rows) = parse_spectrum_json(text) else {
        return;
    };
    let Some(first) = rows.first() else {
        return;
    };
    let doc = SpectrumDocument {
        frame: first.frame,
        rows: rows.iter().map(SpectrumRecord::from).collect(),
    };
    let encoded = serde_json::to_string(&doc).unwrap();
    assert_eq!(parse_spectrum_json(&encoded).unwrap(), rows);
});
