#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(a) = nsgap::io::matrix_from_text(text) {
            let _ = a.row(a.n() - 1);
        }
    }
});
