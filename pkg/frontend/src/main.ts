import { boot } from "./boot";

if (document.readyState === "loading") {
  document.addEventListener("DOMContentLoaded", () => boot(document));
} else {
  boot(document);
}
