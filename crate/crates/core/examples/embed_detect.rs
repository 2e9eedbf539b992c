// Watermark a grayscale image and detect the mark.
//
// `cargo run --example embed_detect`

use cihide::stego::{detect, embed, read_media, write_media, CoverMedia, EmbedKey, Message, Mode, PgmImage};
use cihide::strategies::{Fraction64, PlcmParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (w, h) = (32, 32);
    let pixels = (0..w * h).map(|i| (((i % w) * 8) ^ ((i / w) * 5)) as u8).collect();
    let cover = CoverMedia::Pgm(PgmImage::new(w, h, 255, pixels)?);

    let key = EmbedKey::new("13198a2e03707344".parse()?, 500, PlcmParams::default(), 128)?;
    let msg = Message("243f6a8885a308d3".parse()?);
    let marked = embed(&cover, msg, &key, Mode::Ciis)?;

    let dir = std::env::temp_dir().join(format!("cihide-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("marked.pgm");
    write_media(&marked, &path)?;
    let reread = read_media(&path)?;
    std::fs::remove_dir_all(&dir)?;

    let found = detect(&cover, &reread, msg, &key, Mode::Ciis, 0)?;
    println!("marked image: present = {}, hamming = {}", found.present, found.hamming);
    let clean = detect(&cover, &cover, msg, &key, Mode::Ciis, 0)?;
    println!("unmarked image: present = {}, hamming = {}", clean.present, clean.hamming);
    let wrong = EmbedKey { k: Fraction64(key.k.raw() ^ 1), ..key };
    let other = detect(&cover, &reread, msg, &wrong, Mode::Ciis, 0)?;
    println!("wrong key: present = {}, hamming = {}", other.present, other.hamming);
    Ok(())
}
