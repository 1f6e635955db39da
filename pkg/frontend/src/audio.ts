// Short selection beep via WebAudio; silent outside the browser.

let ctx: AudioContext | null = null;

export function beep(): void {
  if (typeof AudioContext === "undefined") return;
  ctx = ctx ?? new AudioContext();
  const osc = ctx.createOscillator();
  const gain = ctx.createGain();
  osc.frequency.value = 880;
  gain.gain.setValueAtTime(0.12, ctx.currentTime);
  gain.gain.exponentialRampToValueAtTime(0.0001, ctx.currentTime + 0.09);
  osc.connect(gain).connect(ctx.destination);
  osc.start();
  osc.stop(ctx.currentTime + 0.1);
}
