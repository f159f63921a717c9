use deltaglue::fixtures::{toy_geo, toy_values};
use deltaglue::gluing::{glue, glue_via_extension, CompositionLaw};

fn main() {
    let geo = toy_geo();
    let values = toy_values(&geo);
    let law = CompositionLaw::canonical(&geo).unwrap();
    let t0 = std::time::Instant::now();
    let direct = glue(&geo, &values, 1_000_000).unwrap();
    println!("direct glue: {:?}", t0.elapsed());
    let t1 = std::time::Instant::now();
    let bridge = glue_via_extension(&geo, &values, &law, 64, 2_000_000_000, (1_000_000, 1_000));
    match bridge {
        Ok(b) => {
            println!("bridge: {:?}, witness len {}", t1.elapsed(), b.extension.witness.len());
            for f in 0..geo.base.morphisms() {
                let class = b.morphism_classes[f];
                let rep = &b.shadow.representatives[class];
                let chosen = &direct.morphisms[f];
                let same = deltaglue::cat::natural_isos(
                    &values.values[geo.base.src(f)],
                    &values.values[geo.base.tgt(f)],
                    &chosen.functor,
                    rep,
                );
                println!("  morphism {f}: class {class}, nat-iso to direct: {}", !same.is_empty());
            }
        }
        Err(e) => println!("bridge failed after {:?}: {e}", t1.elapsed()),
    }
}
