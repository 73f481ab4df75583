/**
 * Delay calls until `ms` of silence; only the last value in a burst fires.
 * Used so a slider drag becomes one state update per released position.
 */
export function debounce<A>(fn: (value: A) => void, ms: number): (value: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (value: A) => {
    if (timer !== undefined) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = undefined;
      fn(value);
    }, ms);
  };
}
