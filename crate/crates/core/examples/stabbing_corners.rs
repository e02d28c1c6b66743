use skycount::butterfly::{stabbing_check, stabbing_sets, Butterfly};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let shape = Butterfly::new(2, 3)?;
    let (sky, stabbed) = stabbing_sets(shape, 2, 5);
    println!("skyline corners {sky:?}");
    println!("stabbed corners {stabbed:?}");
    assert_eq!(sky, stabbed);
    assert_eq!(sky.len(), 3);

    for shape in [Butterfly::new(2, 4)?, Butterfly::new(3, 2)?] {
        let w = shape.width();
        let all = (0..w).all(|x| (0..w).all(|y| stabbing_check(shape, x, y)));
        assert!(all);
        println!(
            "B = {}, d = {}: all {} grid cells agree",
            shape.b,
            shape.d,
            w * w
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
