/**
 * Profile entry screen. Demographic fields are optional closed dropdowns
 * (invalid values are impossible by construction), the consent checkbox
 * is explicit and unchecked by default, and a network failure keeps the
 * draft on screen behind a retry prompt.
 */

import { ApiClient, ApiError, NetworkError } from "../api.js";
import { clear, el, option } from "../dom.js";

const AGE_BANDS = ["undisclosed", "<18", "18-25", "26-35", "36-50", ">50"];
const GENDERS = ["undisclosed", "female", "male", "non-binary", "other"];
const EDUCATIONS = ["undisclosed", "secondary", "bachelor", "master", "doctorate", "other"];

export interface ProfileScreenHooks {
  onSession(userId: string): void;
}

export function renderProfileScreen(root: HTMLElement, api: ApiClient, hooks: ProfileScreenHooks): void {
  clear(root);

  const ageSelect = el("select", { id: "profile-age", name: "age_band" });
  AGE_BANDS.forEach((band) => ageSelect.append(option(band)));
  const genderSelect = el("select", { id: "profile-gender", name: "gender" });
  GENDERS.forEach((g) => genderSelect.append(option(g)));
  const educationSelect = el("select", { id: "profile-education", name: "education" });
  EDUCATIONS.forEach((e) => educationSelect.append(option(e)));
  const professionInput = el("input", { id: "profile-profession", type: "text", placeholder: "profession (optional)" });
  const consentCheckbox = el("input", { id: "profile-consent", type: "checkbox" });
  consentCheckbox.checked = false; // explicit opt-in, never pre-checked

  const status = el("div", { id: "profile-status", class: "status" });
  const submit = el("button", { id: "profile-submit", type: "button" }, "Save profile");

  const form = el(
    "div",
    { class: "profile-form" },
    el("h2", {}, "Evaluator profile"),
    el("label", {}, "Age band ", ageSelect),
    el("label", {}, "Gender ", genderSelect),
    el("label", {}, "Education ", educationSelect),
    el("label", {}, "Profession ", professionInput),
    el(
      "label",
      { class: "consent-row" },
      consentCheckbox,
      " I consent to my demographic data being used in aggregated analytics",
    ),
    submit,
    status,
  );
  root.append(form);

  const save = async () => {
    status.textContent = "Saving…";
    status.className = "status";
    const body: Record<string, unknown> = {
      age_band: ageSelect.value,
      gender: genderSelect.value,
      education: educationSelect.value,
      profession: professionInput.value,
      consent: consentCheckbox.checked,
    };
    try {
      const { profile } = await api.createProfile(body);
      hooks.onSession(profile.user_id);
      status.className = "status ok";
      status.textContent = profile.consent
        ? `Profile saved (${profile.user_id}).`
        : `Profile saved (${profile.user_id}). Your demographics are excluded from analytics.`;
    } catch (error) {
      if (error instanceof NetworkError) {
        // the draft stays in the form controls; just offer a retry
        status.className = "status error";
        status.textContent = "Network failure — nothing was saved. ";
        const retry = el("button", { id: "profile-retry", type: "button" }, "Retry");
        retry.addEventListener("click", () => void save());
        status.append(retry);
      } else if (error instanceof ApiError) {
        status.className = "status error";
        status.textContent = `${error.code}: ${error.message}`;
      } else {
        throw error;
      }
    }
  };
  submit.addEventListener("click", () => void save());
}
