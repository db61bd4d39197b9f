/** Distribution-fit report: the four-model ranking with its
 * indistinguishable groups, per-fit parameters, and pairwise
 * likelihood-ratio comparisons — numbers straight from the API. */

import { DistfitPayload } from "./api.js";
import { clear, el } from "./dom.js";

function fmt(x: number, digits = 4): string {
  return Number.isInteger(x) ? String(x) : x.toPrecision(digits);
}

export function renderDistfit(container: HTMLElement, payload: DistfitPayload): void {
  clear(container);

  const rankingParts: (Node | string)[] = ["Ranking: "];
  payload.groups.forEach((group, i) => {
    const joined = group.join(" ~ ");
    if (i === 0) {
      rankingParts.push(el("strong", {}, [joined]));
    } else {
      rankingParts.push(" > ", joined);
    }
  });
  rankingParts.push(" (~ marks statistically indistinguishable fits)");
  container.append(
    el("h3", {}, [`${payload.metric} in ${payload.forum_id}`]),
    el("p", { class: "ranking" }, rankingParts),
  );

  const fits = el("table", { class: "fits" });
  fits.append(
    el("tr", {}, [
      el("th", {}, ["model"]),
      el("th", {}, ["parameters"]),
      el("th", {}, ["xmin"]),
      el("th", {}, ["KS"]),
      el("th", {}, ["log-likelihood"]),
      el("th", {}, ["tail n"]),
    ]),
  );
  for (const name of payload.ranked) {
    const fit = payload.fits[name];
    const params = Object.entries(fit.params)
      .map(([k, v]) => `${k}=${fmt(v)}`)
      .join(", ");
    fits.append(
      el("tr", { class: "fit-row", "data-model": name }, [
        el("td", {}, [name]),
        el("td", {}, [params]),
        el("td", {}, [String(fit.xmin)]),
        el("td", {}, [fmt(fit.ks_distance)]),
        el("td", {}, [fmt(fit.log_likelihood, 6)]),
        el("td", {}, [String(fit.n_tail)]),
      ]),
    );
  }
  container.append(fits);

  const cmp = el("table", { class: "comparisons" });
  cmp.append(
    el("tr", {}, [
      el("th", {}, ["A"]),
      el("th", {}, ["B"]),
      el("th", {}, ["R (favors A when > 0)"]),
      el("th", {}, ["p"]),
    ]),
  );
  for (const c of payload.comparisons) {
    cmp.append(
      el("tr", { class: "comparison-row" }, [
        el("td", {}, [c.model_a]),
        el("td", {}, [c.model_b]),
        el("td", {}, [fmt(c.r)]),
        el("td", {}, [c.p < 1e-4 ? c.p.toExponential(2) : fmt(c.p)]),
      ]),
    );
  }
  container.append(cmp);
}
