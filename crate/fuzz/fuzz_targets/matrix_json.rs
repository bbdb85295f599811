#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        // must reject or accept without panicking; never trust the shape
        if let Ok(a) = nsgap::io::matrix_from_json(text) {
            let _ = a.get(0, 0);
        }
    }
});
