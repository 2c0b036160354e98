use polyerg::classification::classify;
use polyerg::PolyFamily;

fn main() -> polyerg::Result<()> {
    let families: [[&str; 3]; 5] = [
        ["n", "n^2", "n^3"],
        ["n", "n^2", "n^2+n"],
        ["n", "2n", "n^2"],
        ["2n", "3n", "4n"],
        ["n^2+n", "n^2+2n", "n^2+5n"],
    ];
    for fam in families {
        let c = classify(&PolyFamily::parse(&fam)?)?;
        println!(
            "{{{}}}: W = {}, type {}, factor {}, exceptional {:?}",
            fam.join(", "),
            c.weyl_complexity,
            c.family_type.tag(),
            c.smallest_factor,
            c.lower_bound_exceptional
        );
    }
    Ok(())
}
