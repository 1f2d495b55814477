use num_complex::Complex64;
use smap::geometry::stereo_lift;
use smap::harness::{read_snapshot, write_snapshot, SnapshotData};
use smap::{ComplexField, GridSpec, SmapError};

fn field(dim: usize) -> ComplexField {
    let g = GridSpec::new(dim, 16, 1.25).unwrap();
    let mut u = ComplexField::from_fn(g, 0.0, |x| {
        Complex64::new((x[0] * 0.7).cos() / 3.0, x.iter().map(|v| v.sin()).sum::<f64>() * 1e-3)
    });
    u.set_time(0.1 + 0.2);
    u
}

#[test]
fn files_round_trip_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    for dim in 1..=3 {
        let u = field(dim);
        let path = dir.path().join(format!("u{dim}.smf"));
        write_snapshot(&path, &SnapshotData::Complex(u.clone())).unwrap();
        let len = std::fs::metadata(&path).unwrap().len() as usize;
        assert_eq!(len, 8 + 4 + 4 * dim + 8 + 8 + 1 + 16 * u.grid().len());
        match read_snapshot(&path).unwrap() {
            SnapshotData::Complex(v) => {
                assert_eq!(v.grid(), u.grid());
                assert_eq!(v.time().to_bits(), u.time().to_bits());
                let bits = |w: &ComplexField| -> Vec<(u64, u64)> {
                    w.values().iter().map(|c| (c.re.to_bits(), c.im.to_bits())).collect()
                };
                assert_eq!(bits(&v), bits(&u));
            }
            SnapshotData::Sphere(_) => panic!("kind byte lost"),
        }

        let s = stereo_lift(&u);
        let path = dir.path().join(format!("s{dim}.smf"));
        write_snapshot(&path, &SnapshotData::Sphere(s.clone())).unwrap();
        match read_snapshot(&path).unwrap() {
            SnapshotData::Sphere(t) => assert_eq!(t.values(), s.values()),
            SnapshotData::Complex(_) => panic!("kind byte lost"),
        }
    }
}

#[test]
fn truncated_or_padded_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u.smf");
    write_snapshot(&path, &SnapshotData::Complex(field(2))).unwrap();
    let bytes = std::fs::read(&path).unwrap();
    for bad in [&bytes[..bytes.len() - 1], &bytes[..20], &[bytes.as_slice(), &[0u8; 8]].concat()[..]] {
        std::fs::write(&path, bad).unwrap();
        assert!(matches!(read_snapshot(&path), Err(SmapError::Snapshot(_))));
    }
    assert!(matches!(read_snapshot(&dir.path().join("missing.smf")), Err(SmapError::Io(_))));
}
