use skycount::succinct::{
    BitBuf, MonotoneSequence, PackedInts, RangeMaxStructure, RankSelectBits, SparseBitVector,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let pattern: Vec<bool> = (0..1000).map(|i| i % 3 == 0 || i % 7 == 0).collect();
    let rs = RankSelectBits::build(BitBuf::from_bools(&pattern), true);
    let ones = pattern.iter().filter(|&&b| b).count();
    assert_eq!(rs.rank1(1000), ones);
    assert_eq!(rs.select1(4), 9);
    assert_eq!(rs.rank0(10), 5);
    println!(
        "rank/select over {} bits: {} bits of storage",
        rs.len(),
        rs.size_bits()
    );

    let sparse = SparseBitVector::from_positions(1 << 20, &[5, 77, 4096, 600_000]);
    assert_eq!(sparse.rank1(4097)?, 3);
    assert_eq!(sparse.select1(3)?, 600_000);
    println!(
        "sparse vector of 2^20 bits, 4 ones: {} bits (budget {:.0})",
        sparse.size_bits(),
        SparseBitVector::bit_budget(1 << 20, 4)
    );

    let counts = [3u64, 0, 4, 1, 5, 9, 2, 6];
    let sums = MonotoneSequence::new(&counts);
    assert_eq!(sums.prefix(4)?, 8);
    assert_eq!(sums.lookup(5)?, 9);
    assert_eq!(sums.total(), 30);

    let heights = [5u32, 1, 9, 9, 2, 7, 3];
    let rmq = RangeMaxStructure::new(&heights);
    assert_eq!(rmq.range_max_index(0, 6)?, 2);
    assert_eq!(rmq.range_max_index(4, 6)?, 5);

    let packed = PackedInts::from_values(&[3, 1, 2, 0], 3);
    assert_eq!((packed.width(), packed.get(2)), (2, 2));
    println!(
        "leftmost maximum of {heights:?} is at {}",
        rmq.range_max_index(0, 6)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
