// Save an index to disk, load it back, and confirm nothing changed.

use skycount::{Error, IndexOptions, QueryRect, RawPoint, SkylineIndex};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let pts: Vec<RawPoint> = (0..500i64)
        .map(|i| RawPoint::new(i * 3 - 700, (i * 211) % 499 - 250))
        .collect();
    let index = SkylineIndex::build(&pts, &IndexOptions::default().with_ball_b(4))?;

    let dir = std::env::temp_dir().join(format!("skycount-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("points.skyc");
    index.save(&path)?;
    let loaded = SkylineIndex::load(&path)?;
    assert_eq!(loaded.to_bytes(), index.to_bytes());

    let q = QueryRect::new(-500, 400, -100, 200);
    assert_eq!(loaded.report(&q), index.report(&q));
    println!(
        "{} bytes on disk, count {} in {q:?}",
        std::fs::metadata(&path)?.len(),
        loaded.count(&q)
    );

    let mut bytes = index.to_bytes();
    let mid = bytes.len() / 2;
    bytes[mid] ^= 0x40;
    match SkylineIndex::from_bytes(&bytes) {
        Err(Error::Format(msg)) => println!("flipped bit rejected: {msg}"),
        other => panic!("corruption not detected: {:?}", other.map(|i| i.len())),
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
