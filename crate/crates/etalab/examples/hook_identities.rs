//! Hook-length machinery: Ferrers-diagram hook multisets, the brute-force
//! hook product series, and verification of the product identities relating
//! them to eta-quotients.

use etalab::hooklen::{
    hook_multiset, hook_t, partitions_of, verify_identity, DEFAULT_PARTITION_CAP,
};

fn main() -> etalab::Result<()> {
    println!("partitions of 4:");
    for p in partitions_of(4, DEFAULT_PARTITION_CAP)? {
        println!("  {p}  hooks {:?}", hook_multiset(&p));
    }

    let example = partitions_of(7, DEFAULT_PARTITION_CAP)?
        .into_iter()
        .find(|p| p.parts() == [4, 2, 1])
        .unwrap();
    println!("\nhooks of (4,2,1): {:?}", hook_multiset(&example));
    println!("hooks of (4,2,1) divisible by 2: {:?}", hook_t(&example, 2));

    println!("\nidentity checks (hook sum vs product vs eta-quotient):");
    for (t, y, z, terms) in [
        (2u64, 1i8, 0i64, 18usize),
        (3, -1, 1, 15),
        (18, 1, 3, 15),
        (1, 1, 7, 20),
    ] {
        let check = verify_identity(t, y, z, terms, DEFAULT_PARTITION_CAP)?;
        println!("  t={t} y={y:+} z={z} through q^{terms}: {check}");
    }
    Ok(())
}
