//! Unreachable arrays and objects are reclaimed while the program runs.

mod common;

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicUsize, Ordering};

use phoenix::compile_str;
use phoenix::pipeline::run_scripted;
use phoenix::vm::RunOptions;

struct Counting;

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);

unsafe impl GlobalAlloc for Counting {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = unsafe { System.alloc(layout) };
        if !p.is_null() {
            let now = CURRENT.fetch_add(layout.size(), Ordering::Relaxed) + layout.size();
            PEAK.fetch_max(now, Ordering::Relaxed);
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        unsafe { System.dealloc(ptr, layout) };
        CURRENT.fetch_sub(layout.size(), Ordering::Relaxed);
    }
}

#[global_allocator]
static GLOBAL: Counting = Counting;

const ITERATIONS: usize = 1_000_000;

/// Runs `src` and returns the growth of peak heap use over the starting level.
fn peak_growth(src: &str) -> (usize, Vec<String>) {
    let image = compile_str(src).unwrap().image;
    let base = CURRENT.load(Ordering::Relaxed);
    PEAK.store(base, Ordering::Relaxed);
    let options = RunOptions {
        max_steps: 100_000_000,
        ..RunOptions::default()
    };
    let (t, r) = run_scripted(&image, &[], options);
    r.unwrap();
    let shown = t.shown().into_iter().map(String::from).collect();
    (PEAK.load(Ordering::Relaxed) - base, shown)
}

// One test function so the global counters are not shared between threads.
#[test]
fn a_million_short_lived_values_stay_bounded() {
    let arrays = common::entry(&format!(
        "رقم ي = 0 ;\nرقم مجموع = 0 ;\nكرر : ي < {ITERATIONS}\n{{\nقائمة-رقم ق[16] ;\nق[3] = ي ;\nمجموع = مجموع + ق[3] ;\nي = ي + 1 ;\n}}\nأعرض : مجموع ;"
    ));
    let (growth, shown) = peak_growth(&arrays);
    assert_eq!(shown, [format!("{}", (ITERATIONS * (ITERATIONS - 1)) / 2)]);
    println!("arrays: peak growth {growth} bytes");
    assert!(growth < 256 * 1024, "peak grew by {growth} bytes");

    let objects = "صنف نقطة\n{\nعام رقم س = 0 ;\nعام كلمة اسم = \"\" ;\n}\n".to_string()
        + &common::entry(&format!(
            "رقم ي = 0 ;\nكرر : ي < {ITERATIONS}\n{{\nنقطة ن ;\nن.س = ي ;\nن.اسم = \"ن\" & ي ;\nي = ي + 1 ;\n}}\nأعرض : ي ;"
        ));
    let (growth, shown) = peak_growth(&objects);
    assert_eq!(shown, [ITERATIONS.to_string()]);
    println!("objects: peak growth {growth} bytes");
    assert!(growth < 256 * 1024, "peak grew by {growth} bytes");
}
