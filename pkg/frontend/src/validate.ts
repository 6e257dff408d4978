// Helpers for live expression validation.

// expression plus a caret line pointing at the reported byte offset
export function caretLine(src: string, offset: number): string {
  const at = Math.max(0, Math.min(offset, src.length));
  return `${src}\n${" ".repeat(at)}^`;
}

export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  ms: number,
): (...args: A) => void {
  let timer: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (timer !== undefined) {
      clearTimeout(timer);
    }
    timer = setTimeout(() => fn(...args), ms);
  };
}
