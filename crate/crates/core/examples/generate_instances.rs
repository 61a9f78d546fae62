//! Generate a few instances of every scheme family and write one set to a
//! JSON-lines file.

use stablepack::io::{read_instances, write_instances};
use stablepack::{generate_instance, generate_set, Result};

fn main() -> Result<()> {
    for scheme in ["S1_10", "S2_M", "B1_30", "B2_30", "B3_30", "BM_M", "M_30", "CASE_40"] {
        let inst = generate_instance(scheme, 1)?;
        println!(
            "{scheme:8} bin {}x{}x{}, {} types, {} items",
            inst.bin.l,
            inst.bin.w,
            inst.bin.h,
            inst.items.len(),
            inst.item_count()
        );
    }

    let path = std::env::temp_dir().join("stablepack_S1_30.jsonl");
    let set = generate_set("S1_30", 100, 7)?;
    write_instances(&path, &set)?;
    assert_eq!(read_instances(&path)?, set);
    println!("wrote {} instances to {}", set.len(), path.display());
    Ok(())
}
