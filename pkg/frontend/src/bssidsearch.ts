/**
 * BSSID search box validation: only a full MAC or a 3-octet OUI prefix is
 * ever sent to the server — malformed input fails inline with no request.
 */

const SEPARATORS = /[:-]/g;
const HEX12 = /^[0-9A-F]{12}$/;
const HEX6 = /^[0-9A-F]{6}$/;

export type QueryCheck =
  | { ok: true; canonical: string; kind: "mac" | "oui" }
  | { ok: false; error: string };

export function validateQuery(raw: string): QueryCheck {
  const digits = raw.trim().replace(SEPARATORS, "").toUpperCase();
  if (HEX12.test(digits)) {
    return { ok: true, canonical: groupOctets(digits), kind: "mac" };
  }
  if (HEX6.test(digits)) {
    return { ok: true, canonical: groupOctets(digits), kind: "oui" };
  }
  return {
    ok: false,
    error: "enter a full MAC (AA:BB:CC:DD:EE:FF) or a 3-octet vendor prefix (AA:BB:CC)",
  };
}

function groupOctets(digits: string): string {
  const pairs: string[] = [];
  for (let i = 0; i < digits.length; i += 2) {
    pairs.push(digits.slice(i, i + 2));
  }
  return pairs.join(":");
}
